#pragma once

#include <cstdint>

#include "lampwalk/element_set.hpp"
#include "lampwalk/group.hpp"
#include "lampwalk/schedule.hpp"

namespace lampwalk {

struct FolnerReport {
  bool pass = false;
  // Translate maximizing |aF \ F| / |F| (first such element in A's order);
  // identity with ratio 0 when A is empty.
  GroupElement worst;
  double worst_ratio = 0.0;
};

// Exact quantitative-invariance check: pass iff |aF \ F| < delta * |F| for
// every a in A, by explicit counting. Throws ConfigError on empty F or
// delta outside (0, 1].
FolnerReport verify_folner(const ElementSet& F, const ElementSet& A,
                           double delta);

// Deterministic search for an (A, delta)-invariant set, smallest passing
// parameters first.
//
// Wreath families use skewed boxes
//   B(R,S) = { (t, L) : every base coordinate in [-R, R],
//                        L contained in [t_last - S, t_last + S] }
// swept by increasing diagonal R+S, then increasing R. The lamp window rides
// with the lamplighter position: translating by a shift moves both together,
// so these boxes become invariant as they grow (fixed-window boxes do not:
// a shifted copy lights no lamps outside [-S, S] yet needs them).
// Free-abelian families use cubes [-r, r]^d of increasing side.
//
// Candidates are scored by an exact closed-form overlap count and the chosen
// set is re-verified elementwise before being returned. Candidates larger
// than caps.set_cap are skipped; if the sweep ends with only such candidates
// ResourceLimitError is thrown, otherwise SearchHorizonError.
ElementSet find_folner(const ElementSet& A, double delta, const GroupSpec& spec,
                       const ResourceCaps& caps);

}  // namespace lampwalk
