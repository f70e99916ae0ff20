#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lampwalk/u128.hpp"
#include "lampwalk/walk.hpp"

namespace lampwalk {

// A record-time of the level sequence: time i (1-based) with k_i >= k_j for
// all j < i. Simple when the inequality is strict for every earlier j
// (time 1 is a simple record by convention). y carries the step color when
// the caller supplies colors, blue otherwise.
struct RecordEvent {
  std::size_t time = 0;
  u128 value = 0;
  bool simple = false;
  Color y = Color::blue;
};

// All record-times of ks in order. ys, when nonempty, must have the same
// length and fills each event's color.
std::vector<RecordEvent> detect_records(const std::vector<u128>& ks,
                                        const std::vector<Color>& ys = {});

std::vector<RecordEvent> detect_records(const Trajectory& t);

// Horizon-relative stabilization certificate: the smallest i0 <= horizon such
// that on [i0, horizon] (1) max{k_1..k_i} > i for every i, and (2) every
// record-time is simple with y = blue. True stabilization is a tail event;
// this only certifies the inspected prefix.
struct StabilizationReport {
  std::size_t horizon = 0;
  std::optional<std::size_t> i0;

  bool certified() const { return i0.has_value(); }
  std::string status() const {
    return certified() ? "certified-at-horizon" : "not-stabilized-at-horizon";
  }
};

StabilizationReport check_stabilization(const Trajectory& t,
                                        std::size_t horizon);

}  // namespace lampwalk
