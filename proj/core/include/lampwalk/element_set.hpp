#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lampwalk/element.hpp"
#include "lampwalk/group.hpp"

namespace lampwalk {

// Finite set of group elements, stored sorted and deduplicated so that
// iteration order, digests, and serialized output are deterministic.
class ElementSet {
 public:
  ElementSet() = default;
  static ElementSet from_unsorted(std::vector<GroupElement> v);
  static ElementSet singleton(GroupElement g);

  const std::vector<GroupElement>& items() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  bool contains(const GroupElement& g) const;
  bool subset_of(const ElementSet& other) const;
  const GroupElement& operator[](std::size_t i) const { return v_[i]; }

  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  std::uint64_t digest() const;

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

 private:
  std::vector<GroupElement> v_;
};

// Default cardinality cap for exact set algebra. The iterative construction's
// textbook exponents are astronomically large; exceeding the cap raises
// ResourceLimitError (with the partial cardinality) instead of hanging.
inline constexpr std::size_t kDefaultSetCap = 1'000'000;

// Exact product set {ab : a in A, b in B}.
ElementSet set_mul(const ElementSet& A, const ElementSet& B,
                   std::size_t cap = kDefaultSetCap);
ElementSet set_inv(const ElementSet& A);
// Exact k-fold product set A^k with the convention A^1 = A; requires k >= 1.
ElementSet set_pow(const ElementSet& A, int k,
                   std::size_t cap = kDefaultSetCap);
ElementSet set_union(const ElementSet& A, const ElementSet& B);
ElementSet left_mul(const GroupElement& g, const ElementSet& A);   // gA
ElementSet right_mul(const ElementSet& A, const GroupElement& g);  // Ag
// Image of A under the factor map of spec (deduplicated).
ElementSet phi_set(const ElementSet& A, const GroupSpec& spec);

}  // namespace lampwalk
