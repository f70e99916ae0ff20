#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "lampwalk/construction.hpp"
#include "lampwalk/element.hpp"
#include "lampwalk/group.hpp"
#include "lampwalk/klaw.hpp"
#include "lampwalk/schedule.hpp"
#include "lampwalk/walk.hpp"

namespace lampwalk::testing {

// Rank-1 wreath element literal.
inline GroupElement el(std::int64_t shift,
                       std::initializer_list<std::int64_t> lamps = {}) {
  GroupElement g;
  g.base = {shift};
  g.lamps.assign(lamps.begin(), lamps.end());
  std::sort(g.lamps.begin(), g.lamps.end());
  return g;
}

inline const GroupSpec& desk_spec() {
  static const GroupSpec spec = GroupSpec::lamplighter(1);
  return spec;
}

// Two verified levels of the small-parameter tower; built once per binary.
inline const Construction& desk_construction() {
  static const Construction cons =
      build_levels(desk_spec(), GrowthSchedule::desk(), 2);
  return cons;
}

inline const KLaw& shared_klaw() {
  static const KLaw law;
  return law;
}

// Fabricated trajectories for fixtures: explicit (k, color, x) per step.
inline Trajectory make_trajectory(const std::vector<Step>& steps,
                                  std::uint64_t master_seed = 0,
                                  std::uint64_t index = 0) {
  Trajectory t;
  t.master_seed = master_seed;
  t.index = index;
  t.steps = steps;
  return t;
}

// Blue step with a materialized increment.
inline Step blue(std::uint64_t k, const GroupElement& x) {
  return Step{u128(k), Color::blue, true, x};
}

// Red step; the increment is the level's shift element (identity at level 1).
inline Step red(std::uint64_t k, const GroupElement& x) {
  return Step{u128(k), Color::red, true, x};
}

// Step whose level exceeds the built depth: increment never materialized.
inline Step blue_unresolved(std::uint64_t k, int rank = 1) {
  return Step{u128(k), Color::blue, false, GroupElement::identity(rank)};
}

inline std::vector<u128> ks_of(const Trajectory& t) {
  std::vector<u128> ks;
  for (const auto& s : t.steps) ks.push_back(s.k);
  return ks;
}

}  // namespace lampwalk::testing
