#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lampwalk {

// A point of the ambient group. The representation covers every built-in
// family with one canonical form:
//
//   * wreath families (lamp groups over Z): `base` holds the base-coordinates
//     and its last entry is the lamplighter position; `lamps` is the sorted
//     list of positions with a lit Z/2 lamp.
//   * free-abelian Z^d: `base` holds the d coordinates and `lamps` is empty.
//
// The product twists lamp positions by the left factor's lamplighter position:
//   (s, L) * (t, M) = (s + t, L symdiff (s + M))     [componentwise base sum]
// which degenerates to plain coordinate addition when both lamp sets are
// empty, so the same arithmetic serves the abelian control family.
struct GroupElement {
  std::vector<std::int64_t> base;
  std::vector<std::int64_t> lamps;  // strictly increasing

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  // Lexicographic on (base, lamps): the fixed total order used for
  // deterministic tie-breaking everywhere (enumeration, set storage, output).
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

GroupElement identity(int rank);
bool is_canonical(const GroupElement& a);
bool is_identity(const GroupElement& a);

GroupElement mul(const GroupElement& a, const GroupElement& b);
GroupElement inv(const GroupElement& a);

// Serialized form, used bit-exactly by caches, dumps, and CSVs:
//   rank 1:  (shift,[l1,l2,...])        e.g. (17,[-11])
//   rank r:  (b1,...,br,[l1,...])       e.g. (7,3,[1])
// No spaces; lamps sorted ascending; the lamp bracket is always present.
std::string format_element(const GroupElement& a);

// Strict parse of the format above. If expected_rank >= 0 the base rank must
// match. Throws ConfigError on malformed input.
GroupElement parse_element(std::string_view s, int expected_rank = -1);

std::uint64_t element_digest(const GroupElement& a);

}  // namespace lampwalk
