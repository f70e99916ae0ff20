#pragma once

#include <cstdint>
#include <string>

#include "lampwalk/digest.hpp"

namespace lampwalk {

// Integer affine form mul*i + add, used for level-indexed exponents.
struct AffineForm {
  std::int64_t mul = 0;
  std::int64_t add = 0;

  std::int64_t operator()(std::int64_t i) const { return mul * i + add; }
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

// Hard limits that turn would-be runaway computations into loud errors.
struct ResourceCaps {
  // Maximum cardinality of any materialized element set (products, powers,
  // invariant-set candidates).
  std::size_t set_cap = 1'000'000;
  // Separator search: number of enumeration-prefix candidates tried before
  // switching to the marker family.
  std::size_t lock_enum_horizon = 64;
  // Separator search: maximum marker-family offset tried.
  std::size_t marker_slack_max = 64;
  // Invariant-set search: maximum box-parameter diagonal swept.
  std::size_t folner_diag_max = 4096;

  std::string canonical_string() const;
  friend bool operator==(const ResourceCaps&, const ResourceCaps&) = default;
};

// Level-indexed growth parameters of the iterative construction, plus the
// resource caps under which it runs. Exponents are affine in the level index
// so both shipped presets and custom schedules share one representation.
struct GrowthSchedule {
  std::string name = "custom";
  AffineForm folner_power{0, 1};   // exponent on the invariance target set
  AffineForm lock_power{0, 2};     // exponent on D feeding the separator
  AffineForm w_power{0, 1};        // exponent on A in the W-set products
  AffineForm delta_denom{1, 1};    // tolerance denominator; delta = 1/denom
  ResourceCaps caps;

  // Scaled-down schedule: every diagnostic is feasible on one desktop core.
  static GrowthSchedule desk();
  // Asymptotic-strength schedule: documented to exhaust the resource caps
  // past level 1; kept so the gap to the feasible preset stays inspectable.
  static GrowthSchedule paper();
  static GrowthSchedule by_name(const std::string& name);

  std::int64_t folner_exponent(std::int64_t i) const { return folner_power(i); }
  std::int64_t lock_exponent(std::int64_t i) const { return lock_power(i); }
  std::int64_t w_exponent(std::int64_t i) const { return w_power(i); }
  // Invariance tolerance at level i; the denominator is floored at 2 so the
  // level-1 tolerance is always defined (and equals 1/2 on both presets).
  double delta(std::int64_t i) const;

  // Throws ConfigError unless all level-1 exponents are >= 1, exponents are
  // non-decreasing in the level, and the tolerance lies in (0, 1].
  void validate() const;

  std::string canonical_string() const;
  std::uint64_t digest() const { return fnv1a(canonical_string()); }
  friend bool operator==(const GrowthSchedule&, const GrowthSchedule&) =
      default;
};

}  // namespace lampwalk
