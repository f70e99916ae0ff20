#pragma once

#include <optional>

#include "lampwalk/element_set.hpp"
#include "lampwalk/group.hpp"
#include "lampwalk/schedule.hpp"

namespace lampwalk {

struct LockWitness {
  enum class Kind { injectivity, disjointness };
  Kind kind = Kind::injectivity;
  // injectivity: (a1, a2) != (a1b, a2b) with a1*b*a2 == a1b*b*a2b.
  // disjointness: a1*b*a2 == member (an element of A).
  GroupElement a1, a2, a1b, a2b, member;
};

struct LockReport {
  bool pass = false;
  std::optional<LockWitness> witness;  // first violation in pair order
};

// Exhaustive separator check: pass iff (x, y) -> x*b*y is injective on A x A
// and A is disjoint from A*b*A. One pass over all |A|^2 products, keyed by a
// content digest with exact element comparison on digest equality.
LockReport verify_lock(const GroupElement& b, const ElementSet& A);

// Deterministic separator search over the factor group described by spec
// (callers pass phi-images; spec must be the factor group's own spec).
//
// Phase 1 tries the first caps.lock_enum_horizon enumerated elements, each
// screened by an exact difference-set criterion: with U = A^-1 A, V = A A^-1,
//   injectivity fails  iff  some v in V\{e} has b v b^-1 in U\{e},
//   disjointness fails iff  some a in A has b*a in U.
// Phase 2 (wreath families only) tries marker elements
//   b = (2*W + T + 1 + slack, { -(W + T + 1) })
// where W / T bound |lamp position| / |shift| over A: the far-off lamp and
// the large shift keep the two A-factors from interacting. Every returned
// element passes a full verify_lock before being accepted.
//
// Throws SearchHorizonError when both phases are exhausted — the designed
// outcome on the free-abelian control, where x + b + y is symmetric in
// (x, y) and no separator exists for |A| >= 2.
GroupElement find_lock(const ElementSet& A, const GroupSpec& spec,
                       const ResourceCaps& caps);

}  // namespace lampwalk
