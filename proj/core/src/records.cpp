#include "lampwalk/records.hpp"

#include <algorithm>

#include "lampwalk/errors.hpp"

namespace lampwalk {

std::vector<RecordEvent> detect_records(const std::vector<u128>& ks,
                                        const std::vector<Color>& ys) {
  if (ks.empty()) throw ConfigError("record detection needs a nonempty sequence");
  if (!ys.empty() && ys.size() != ks.size()) {
    throw ConfigError("color sequence length does not match level sequence");
  }
  std::vector<RecordEvent> out;
  u128 best = 0;
  bool first = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const bool record = first || ks[i] >= best;
    const bool simple = first || ks[i] > best;
    if (record) {
      RecordEvent e;
      e.time = i + 1;
      e.value = ks[i];
      e.simple = simple;
      e.y = ys.empty() ? Color::blue : ys[i];
      out.push_back(e);
    }
    best = first ? ks[i] : std::max(best, ks[i]);
    first = false;
  }
  return out;
}

std::vector<RecordEvent> detect_records(const Trajectory& t) {
  std::vector<u128> ks;
  std::vector<Color> ys;
  ks.reserve(t.steps.size());
  ys.reserve(t.steps.size());
  for (const Step& s : t.steps) {
    ks.push_back(s.k);
    ys.push_back(s.y);
  }
  return detect_records(ks, ys);
}

StabilizationReport check_stabilization(const Trajectory& t,
                                        std::size_t horizon) {
  if (horizon < 1 || horizon > t.steps.size()) {
    throw ConfigError("stabilization horizon must lie within the trajectory");
  }
  StabilizationReport rep;
  rep.horizon = horizon;

  // Last time the running max fails to exceed the clock.
  std::size_t last_max_fail = 0;
  u128 running = 0;
  for (std::size_t i = 1; i <= horizon; ++i) {
    running = std::max(running, t.steps[i - 1].k);
    if (running <= u128{i}) last_max_fail = i;
  }

  // Last record-time that is not simple-and-blue.
  std::size_t last_bad_record = 0;
  std::vector<u128> ks(horizon);
  std::vector<Color> ys(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    ks[i] = t.steps[i].k;
    ys[i] = t.steps[i].y;
  }
  for (const RecordEvent& e : detect_records(ks, ys)) {
    if (!e.simple || e.y != Color::blue) last_bad_record = e.time;
  }

  const std::size_t i0 = std::max(last_max_fail, last_bad_record) + 1;
  if (i0 <= horizon) rep.i0 = i0;
  return rep;
}

}  // namespace lampwalk
