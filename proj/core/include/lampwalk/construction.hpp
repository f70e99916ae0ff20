#pragma once

#include <cstdint>
#include <vector>

#include "lampwalk/element_set.hpp"
#include "lampwalk/folner.hpp"
#include "lampwalk/group.hpp"
#include "lampwalk/lock.hpp"
#include "lampwalk/schedule.hpp"

namespace lampwalk {

// One level i of the iterative construction. Stored fields are the level's
// defining data; F_inv and bF_inv are derived (and re-derived on cache load).
//
// Invariants (re-checked by verify_construction):
//   - A_1 = {e}; A_{i+1} = D_i ∪ b_i F_i^-1 ∪ F_i b_i^-1.
//   - c_i is the i-th element of the deterministic enumeration.
//   - F_i is (T_i, delta(i))-invariant for
//         T_i = (A_i ∪ {c_i} ∪ {c_i^-1})^folner_exponent(i).
//   - D_i = F_i^-1 ∪ F_i ∪ A_i ∪ {c_i} ∪ {c_i^-1}.
//   - phi(b_i) is a separator for phi(D_i^lock_exponent(i)).
struct ConstructionLevel {
  std::int64_t index = 0;
  ElementSet A;
  ElementSet F;
  ElementSet D;
  GroupElement b;
  GroupElement c;
  // Derived:
  ElementSet F_inv;
  ElementSet bF_inv;
};

struct Construction {
  GroupSpec spec;
  GrowthSchedule schedule;
  std::vector<ConstructionLevel> levels;

  std::int64_t depth() const {
    return static_cast<std::int64_t>(levels.size());
  }
  // 1-based level access.
  const ConstructionLevel& level(std::int64_t i) const;
  ConstructionLevel& level(std::int64_t i);
};

// Populates a level's derived sets from its stored fields.
void derive_level_sets(ConstructionLevel& lvl);

// Builds levels 1..L. Deterministic; errors carry the level reached.
Construction build_levels(const GroupSpec& spec, const GrowthSchedule& schedule,
                          std::int64_t L);

// From-scratch re-verification of every stored invariant (enumeration
// prefix, recursions, invariant sets, separators, derived sets). Throws
// VerificationError on the first violation.
void verify_construction(const Construction& c);

}  // namespace lampwalk
