#pragma once

#include <cstdint>
#include <vector>

#include "lampwalk/measure.hpp"
#include "lampwalk/u128.hpp"

namespace lampwalk {

// Bit-packed representation of rank-1 wreath measures for the convolution
// and translation-distance hot paths: the lamp set lives in a fixed global
// window as a 128-bit mask, so products reduce to shifts and XORs and atoms
// compare as plain integer pairs.
struct PackedAtom {
  std::int64_t shift = 0;
  u128 mask = 0;  // bit j <=> lit lamp at position (window base + j)
  double mass = 0.0;
};

struct PackedMeasure {
  std::int64_t base = 0;  // lamp position of mask bit 0
  int width = 0;          // window bits in use, <= 127
  std::vector<PackedAtom> atoms;  // sorted by (shift, mask), masses positive
  double deficit = 0.0;
};

// Requires a rank-1 measure whose lamp span fits 127 bits.
PackedMeasure pack_measure(const TruncatedMeasure& m);
TruncatedMeasure unpack_measure(const PackedMeasure& m);

// Exact convolution; throws ResourceLimitError when the pair grid, the
// result support, or the combined lamp window exceeds its limit.
PackedMeasure convolve_packed(const PackedMeasure& m1, const PackedMeasure& m2,
                              std::size_t support_cap);

// Pushforward x -> g x (re-sorted, possibly widened window).
PackedMeasure left_translate_packed(const GroupElement& g,
                                    const PackedMeasure& m);

// l1 distance over the union of supports; windows may differ.
double tv_packed(const PackedMeasure& m1, const PackedMeasure& m2);

// Open-addressing index over a packed measure's atoms, for repeated
// mass lookups without materializing translated copies.
class PackedIndex {
 public:
  explicit PackedIndex(const PackedMeasure& m);
  // Mass at (shift, mask-in-m's-window), 0 for non-atoms.
  double mass_of(std::int64_t shift, u128 mask) const;
  bool contains(std::int64_t shift, u128 mask) const;

 private:
  const PackedMeasure& m_;
  std::vector<std::uint64_t> hash_;  // 0 = empty slot
  std::vector<std::uint32_t> idx_;
  std::uint64_t mask_bits_ = 0;
  std::size_t slot_of(std::int64_t shift, u128 mask) const;
};

// TV(g * m, m) computed in one deterministic pass over m's atoms using the
// index (no translated copy):
//   sum_z |m(g^-1 z) - m(z)|  +  sum_x m(x) * [g x not an atom of m].
double tv_left_translate(const GroupElement& g, const PackedMeasure& m,
                         const PackedIndex& index);

}  // namespace lampwalk
