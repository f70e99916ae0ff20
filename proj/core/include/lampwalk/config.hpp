#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lampwalk/group.hpp"
#include "lampwalk/schedule.hpp"

namespace lampwalk {

// One run's complete configuration. Serializable (JSON) and digestible; the
// digest appears in every output file header and keys replay rejection.
struct RunConfig {
  GroupSpec spec = GroupSpec::lamplighter(1);
  GrowthSchedule schedule = GrowthSchedule::desk();
  std::string preset = "desk";  // name of the preset this was derived from
  std::uint64_t seed = 1;
  std::int64_t levels = 2;
  std::int64_t k_max = 2;
  std::size_t horizon = 32;                      // tail horizon
  std::vector<std::size_t> horizons = {16, 32, 64};  // monotonicity probes
  std::size_t n_traj = 10'000;
  std::size_t traj_len = 64;
  std::size_t tv_n_max = 3;
  std::vector<std::string> tv_elements = {"(1,[])", "(0,[0])"};
  double min_freq = 0.01;
  std::size_t tau_level = 2;
  std::string out_dir = "out";

  void validate() const;
  std::string canonical_text() const;
  std::string digest() const;  // 16 hex chars
  std::string to_json() const;

  static RunConfig preset_desk();
  static RunConfig preset_paper();
  static RunConfig preset_abelian();
  static RunConfig by_preset(const std::string& name);
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
};

}  // namespace lampwalk
