#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lampwalk/construction.hpp"
#include "lampwalk/element.hpp"
#include "lampwalk/element_set.hpp"
#include "lampwalk/records.hpp"
#include "lampwalk/u128.hpp"
#include "lampwalk/walk.hpp"

namespace lampwalk {

// Unique factorization w = q1 * core * q2 with q1, q2 in the level's
// bounded product set and core in the marked coset (all in the factor group).
struct Decomposition {
  GroupElement q1;
  GroupElement core;
  GroupElement q2;
};

// Per-level search data in the factor group. Q is the bounded product set
// the decomposition quantifies over; BF is the marked coset. feasible is
// false when Q exceeds the cardinality cap (searches at that level are then
// unavailable, never silently approximated).
struct LevelTail {
  std::size_t level = 0;
  bool feasible = false;
  ElementSet Q;
  ElementSet BF;
  ElementSet BFQ;  // BF * Q: every product "core * trailing factor"
};

class TailContext {
 public:
  explicit TailContext(const Construction& cons);

  const Construction& construction() const { return *cons_; }
  std::size_t depth() const { return levels_.size(); }
  bool feasible(std::size_t level) const;
  const LevelTail& level(std::size_t n) const;  // 1-based

 private:
  const Construction* cons_;
  std::vector<LevelTail> levels_;
};

// Exhaustive search for a decomposition of w at the given level. Returns
// none when w has none there. The left factor q1 and the remaining product
// core * q2 are unique (two distinct left factors would falsify the level's
// verified lock and raise a verification error); the split of that product
// into core and q2 can be ambiguous, so the returned split is the one with
// the smallest q2 in element order.
std::optional<Decomposition> decompose_w(const TailContext& ctx,
                                         const GroupElement& w,
                                         std::size_t level);

// The level and left factor of w's decomposition, scanning every feasible
// level. At most one level may match (else verification error).
struct PMatch {
  GroupElement q;
  std::size_t level = 0;
};

std::optional<PMatch> p_map(const TailContext& ctx, const GroupElement& w);

// Iterated left factors p(w), p(p(w)), ... that themselves decompose at some
// level, in discovery order. Membership levels must strictly decrease (a
// violation raises a verification error; it would allow nontermination).
std::vector<GroupElement> t_chain(const TailContext& ctx,
                                  const GroupElement& w);

// Full decomposition set of one level (bounded products times the marked
// coset times bounded products), for exhaustive cross-checks.
ElementSet w_set(const TailContext& ctx, std::size_t level);

enum class Confidence { cross_checked, bookkeeping_only };

inline const char* confidence_name(Confidence c) {
  return c == Confidence::cross_checked ? "cross-checked" : "bookkeeping-only";
}

// One accumulated tail element: the walk state just before a record-time,
// keyed by the preceding record's level. resolved is false when the state
// needs an unresolved step (level and position in the record order are still
// exact). Confidence is cross-checked when an independent decomposition
// search confirmed membership at the claimed level.
struct TailEntry {
  u128 level = 0;
  bool resolved = false;
  GroupElement value;
  Confidence confidence = Confidence::bookkeeping_only;
};

struct TailValue {
  std::size_t horizon = 0;
  std::size_t i0 = 0;
  std::vector<TailEntry> entries;  // strictly increasing levels
  std::size_t unresolved_count = 0;

  const TailEntry* entry_at_level(u128 level) const;
};

// Tail functional by record bookkeeping on [i0, horizon]: each consecutive
// pair of record-times (r, r') past the certified stabilization point
// contributes the state just before r' at level k_r. Returns none when the
// prefix is not certified at this horizon. Entries are cross-checked by
// decomposition search where feasible, and the full iterated-factor chain of
// the horizon state is checked for consistency when every step is resolved.
std::optional<TailValue> tau(const TailContext& ctx, const Trajectory& t,
                             std::size_t horizon);

// The same trajectory with the first step replaced. The replacement must be
// a triple the sampler can emit (zero-probability replacements rejected).
// ratio is p(replacement)/p(original first step), or none when the original
// first step is unresolved at the built depth.
struct PerturbResult {
  Trajectory trajectory;
  std::optional<double> ratio;
};

PerturbResult perturb_first(const Trajectory& t, const Step& replacement,
                            const Construction& cons, const KLaw& law);

}  // namespace lampwalk
