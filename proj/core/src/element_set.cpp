#include "lampwalk/element_set.hpp"

#include <algorithm>

#include "lampwalk/digest.hpp"
#include "lampwalk/errors.hpp"

namespace lampwalk {

ElementSet ElementSet::from_unsorted(std::vector<GroupElement> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  ElementSet s;
  s.v_ = std::move(v);
  return s;
}

ElementSet ElementSet::singleton(GroupElement g) {
  ElementSet s;
  s.v_.push_back(std::move(g));
  return s;
}

bool ElementSet::contains(const GroupElement& g) const {
  return std::binary_search(v_.begin(), v_.end(), g);
}

bool ElementSet::subset_of(const ElementSet& other) const {
  return std::includes(other.v_.begin(), other.v_.end(), v_.begin(), v_.end());
}

std::uint64_t ElementSet::digest() const {
  Fnv1a f;
  f.update_u64(v_.size());
  for (const GroupElement& g : v_) f.update_u64(element_digest(g));
  return f.value();
}

namespace {

// Merge a sorted-unique block into a sorted-unique accumulator.
void merge_unique(std::vector<GroupElement>& acc,
                  std::vector<GroupElement>& block) {
  if (block.empty()) return;
  if (acc.empty()) {
    acc = std::move(block);
    return;
  }
  std::vector<GroupElement> merged;
  merged.reserve(acc.size() + block.size());
  std::merge(acc.begin(), acc.end(), block.begin(), block.end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  acc = std::move(merged);
  block.clear();
}

}  // namespace

ElementSet set_mul(const ElementSet& A, const ElementSet& B, std::size_t cap) {
  const std::size_t total = A.size() * B.size();
  // Small product grids are materialized outright; astronomically large ones
  // are streamed in blocks with exact deduplication so the cardinality cap
  // can trip without exhausting memory.
  constexpr std::size_t kBlock = 1u << 22;
  if (total <= kBlock * 4) {
    std::vector<GroupElement> prod;
    prod.reserve(total);
    for (const GroupElement& a : A) {
      for (const GroupElement& b : B) prod.push_back(mul(a, b));
    }
    ElementSet out = ElementSet::from_unsorted(std::move(prod));
    if (out.size() > cap) {
      throw ResourceLimitError("product set exceeds the cardinality cap",
                               out.size());
    }
    return out;
  }
  std::vector<GroupElement> acc;
  std::vector<GroupElement> block;
  block.reserve(kBlock);
  for (const GroupElement& a : A) {
    for (const GroupElement& b : B) {
      block.push_back(mul(a, b));
      if (block.size() == kBlock) {
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        merge_unique(acc, block);
        block.reserve(kBlock);
        if (acc.size() > cap) {
          throw ResourceLimitError("product set exceeds the cardinality cap",
                                   acc.size());
        }
      }
    }
  }
  std::sort(block.begin(), block.end());
  block.erase(std::unique(block.begin(), block.end()), block.end());
  merge_unique(acc, block);
  if (acc.size() > cap) {
    throw ResourceLimitError("product set exceeds the cardinality cap",
                             acc.size());
  }
  return ElementSet::from_unsorted(std::move(acc));
}

ElementSet set_inv(const ElementSet& A) {
  std::vector<GroupElement> v;
  v.reserve(A.size());
  for (const GroupElement& a : A) v.push_back(inv(a));
  return ElementSet::from_unsorted(std::move(v));
}

ElementSet set_pow(const ElementSet& A, int k, std::size_t cap) {
  if (k < 1) throw ConfigError("set power requires exponent >= 1");
  // Product sets are associative, so A^k splits as A^(k/2) * A^(k/2) (* A).
  if (k == 1) return A;
  ElementSet half = set_pow(A, k / 2, cap);
  ElementSet out = set_mul(half, half, cap);
  if (k % 2 == 1) out = set_mul(out, A, cap);
  return out;
}

ElementSet set_union(const ElementSet& A, const ElementSet& B) {
  std::vector<GroupElement> v;
  v.reserve(A.size() + B.size());
  std::merge(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(v));
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return ElementSet::from_unsorted(std::move(v));
}

ElementSet left_mul(const GroupElement& g, const ElementSet& A) {
  std::vector<GroupElement> v;
  v.reserve(A.size());
  for (const GroupElement& a : A) v.push_back(mul(g, a));
  return ElementSet::from_unsorted(std::move(v));
}

ElementSet right_mul(const ElementSet& A, const GroupElement& g) {
  std::vector<GroupElement> v;
  v.reserve(A.size());
  for (const GroupElement& a : A) v.push_back(mul(a, g));
  return ElementSet::from_unsorted(std::move(v));
}

ElementSet phi_set(const ElementSet& A, const GroupSpec& spec) {
  if (spec.factor_is_identity()) return A;
  std::vector<GroupElement> v;
  v.reserve(A.size());
  for (const GroupElement& a : A) v.push_back(phi(a, spec));
  return ElementSet::from_unsorted(std::move(v));
}

}  // namespace lampwalk
