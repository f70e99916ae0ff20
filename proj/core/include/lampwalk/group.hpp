#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lampwalk/element.hpp"

namespace lampwalk {

enum class GroupFamily { lamplighter, free_abelian };

// Describes the ambient group G, its distinguished factor group, and the
// generating set used for deterministic element enumeration.
//
//   lamplighter, base_rank = 1:   the wreath product (Z/2 wr Z); the factor
//                                 map is the identity.
//   lamplighter, base_rank = r>1: Z^(r-1) x (Z/2 wr Z); the factor map drops
//                                 the leading r-1 free coordinates.
//   free_abelian, base_rank = d:  Z^d; the factor map is the identity. This
//                                 family is the negative control: separator
//                                 searches must fail on sets of size >= 2.
struct GroupSpec {
  GroupFamily family = GroupFamily::lamplighter;
  int base_rank = 1;
  int lamp_modulus = 2;  // only 2 is supported in v1
  // Optional explicit generators; empty means the family default
  // (unit translations plus, for wreath families, the lamp toggle at 0).
  std::vector<GroupElement> generators;

  static GroupSpec lamplighter(int base_rank = 1);
  static GroupSpec free_abelian(int rank);

  void validate() const;  // throws ConfigError
  int rank() const { return base_rank; }
  bool wreath() const { return family == GroupFamily::lamplighter; }
  std::string family_name() const;

  // Generators actually used (defaults filled in), without inverses.
  std::vector<GroupElement> effective_generators() const;

  // The factor group's own spec; the factor map is phi() below.
  GroupSpec factor() const;
  bool factor_is_identity() const { return !wreath() || base_rank == 1; }

  std::string canonical_string() const;
  std::uint64_t digest() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

// The canonical epimorphism onto the factor group described by spec.factor().
GroupElement phi(const GroupElement& a, const GroupSpec& spec);

// Deterministic injective enumeration c_1, c_2, ... of group elements:
// breadth-first by word length over generators-and-inverses, ties within a
// layer broken by the fixed total order on elements. c_1 is the identity.
std::vector<GroupElement> enumerate_elements(const GroupSpec& spec,
                                             std::size_t n);

}  // namespace lampwalk
