#include "lampwalk/schedule.hpp"

#include <algorithm>
#include <sstream>

#include "lampwalk/errors.hpp"

namespace lampwalk {

std::string ResourceCaps::canonical_string() const {
  std::ostringstream os;
  os << "caps{set_cap=" << set_cap << ";lock_enum_horizon=" << lock_enum_horizon
     << ";marker_slack_max=" << marker_slack_max
     << ";folner_diag_max=" << folner_diag_max << "}";
  return os.str();
}

GrowthSchedule GrowthSchedule::desk() {
  GrowthSchedule s;
  s.name = "desk";
  s.folner_power = {0, 1};
  s.lock_power = {0, 2};
  s.w_power = {0, 1};
  s.delta_denom = {1, 1};
  return s;
}

GrowthSchedule GrowthSchedule::paper() {
  GrowthSchedule s;
  s.name = "paper";
  s.folner_power = {1, 1};
  s.lock_power = {10, 10};
  s.w_power = {1, 0};
  s.delta_denom = {1, 0};
  return s;
}

GrowthSchedule GrowthSchedule::by_name(const std::string& name) {
  if (name == "desk") return desk();
  if (name == "paper") return paper();
  throw ConfigError("unknown schedule preset: " + name);
}

double GrowthSchedule::delta(std::int64_t i) const {
  const std::int64_t denom = std::max<std::int64_t>(delta_denom(i), 2);
  return 1.0 / static_cast<double>(denom);
}

void GrowthSchedule::validate() const {
  const auto check = [](const AffineForm& f, const char* what) {
    if (f.mul < 0) {
      throw ConfigError(std::string("schedule: ") + what +
                        " must be non-decreasing in the level");
    }
    if (f(1) < 1) {
      throw ConfigError(std::string("schedule: ") + what +
                        " must be >= 1 at level 1");
    }
  };
  check(folner_power, "folner_power");
  check(lock_power, "lock_power");
  check(w_power, "w_power");
  if (delta_denom.mul < 0 || delta_denom(1) < 1) {
    throw ConfigError("schedule: delta denominator must be positive and "
                      "non-decreasing in the level");
  }
  if (caps.set_cap == 0) throw ConfigError("schedule: set_cap must be >= 1");
}

std::string GrowthSchedule::canonical_string() const {
  std::ostringstream os;
  const auto aff = [&os](const char* key, const AffineForm& f) {
    os << key << "=" << f.mul << "*i+" << f.add << ";";
  };
  os << "schedule{name=" << name << ";";
  aff("folner_power", folner_power);
  aff("lock_power", lock_power);
  aff("w_power", w_power);
  aff("delta_denom", delta_denom);
  os << caps.canonical_string() << "}";
  return os.str();
}

}  // namespace lampwalk
