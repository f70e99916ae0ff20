#include "lampwalk/config.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lampwalk/digest.hpp"
#include "lampwalk/element.hpp"
#include "lampwalk/errors.hpp"
#include "lampwalk/serialize.hpp"

namespace lampwalk {

namespace {

using nlohmann::json;

std::string precise(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.find(it.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

std::uint64_t as_u64(const json& v, const std::string& what) {
  if (!v.is_number_unsigned()) {
    throw ConfigError(what + " must be an unsigned integer");
  }
  return v.get<std::uint64_t>();
}

std::int64_t as_i64(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<std::int64_t>();
}

std::size_t as_count(const json& v, const std::string& what) {
  const std::uint64_t u = as_u64(v, what);
  return static_cast<std::size_t>(u);
}

AffineForm as_affine(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) {
    throw ConfigError(what + " must be a [multiplier, offset] pair");
  }
  AffineForm f;
  f.mul = as_i64(v[0], what + " multiplier");
  f.add = as_i64(v[1], what + " offset");
  return f;
}

GroupSpec parse_group(const json& g) {
  require_keys(g, {"family", "base_rank", "lamp_modulus"}, "group");
  if (!g.contains("family") || !g["family"].is_string()) {
    throw ConfigError("group.family must be a string");
  }
  const std::string family = g["family"].get<std::string>();
  const int rank =
      g.contains("base_rank")
          ? static_cast<int>(as_i64(g["base_rank"], "group.base_rank"))
          : 1;
  GroupSpec spec;
  if (family == "lamplighter") {
    spec = GroupSpec::lamplighter(rank);
  } else if (family == "free_abelian") {
    spec = GroupSpec::free_abelian(rank);
  } else {
    throw ConfigError("unknown group family '" + family + "'");
  }
  if (g.contains("lamp_modulus") &&
      as_i64(g["lamp_modulus"], "group.lamp_modulus") != 2) {
    throw ConfigError("only lamp modulus 2 is supported");
  }
  return spec;
}

GrowthSchedule parse_schedule(const json& s) {
  require_keys(s,
               {"name", "folner_power", "lock_power", "w_power", "delta_denom",
                "caps"},
               "schedule");
  GrowthSchedule sched;
  if (s.contains("name")) {
    if (!s["name"].is_string()) {
      throw ConfigError("schedule.name must be a string");
    }
    const std::string name = s["name"].get<std::string>();
    if (name != "custom") sched = GrowthSchedule::by_name(name);
    sched.name = name;
  }
  if (s.contains("folner_power")) {
    sched.folner_power = as_affine(s["folner_power"], "schedule.folner_power");
  }
  if (s.contains("lock_power")) {
    sched.lock_power = as_affine(s["lock_power"], "schedule.lock_power");
  }
  if (s.contains("w_power")) {
    sched.w_power = as_affine(s["w_power"], "schedule.w_power");
  }
  if (s.contains("delta_denom")) {
    sched.delta_denom = as_affine(s["delta_denom"], "schedule.delta_denom");
  }
  if (s.contains("caps")) {
    const json& c = s["caps"];
    require_keys(
        c, {"set_cap", "lock_enum_horizon", "marker_slack_max",
            "folner_diag_max"},
        "schedule.caps");
    if (c.contains("set_cap")) {
      sched.caps.set_cap = as_count(c["set_cap"], "caps.set_cap");
    }
    if (c.contains("lock_enum_horizon")) {
      sched.caps.lock_enum_horizon =
          as_count(c["lock_enum_horizon"], "caps.lock_enum_horizon");
    }
    if (c.contains("marker_slack_max")) {
      sched.caps.marker_slack_max =
          as_count(c["marker_slack_max"], "caps.marker_slack_max");
    }
    if (c.contains("folner_diag_max")) {
      sched.caps.folner_diag_max =
          as_count(c["folner_diag_max"], "caps.folner_diag_max");
    }
  }
  return sched;
}

}  // namespace

void RunConfig::validate() const {
  spec.validate();
  schedule.validate();
  if (levels < 1) throw ConfigError("levels must be at least 1");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (traj_len < 1) throw ConfigError("trajectory length must be at least 1");
  if (horizon < 1 || horizon > traj_len) {
    throw ConfigError("horizon must lie in [1, trajectory length]");
  }
  for (const std::size_t h : horizons) {
    if (h < 1 || h > traj_len) {
      throw ConfigError("every horizon must lie in [1, trajectory length]");
    }
  }
  if (n_traj < 1) throw ConfigError("trajectory count must be at least 1");
  if (tv_n_max < 1) throw ConfigError("tv_powers must be at least 1");
  if (!(min_freq > 0.0) || min_freq > 1.0) {
    throw ConfigError("min_freq must lie in (0, 1]");
  }
  if (tau_level < 1) throw ConfigError("tau_level must be at least 1");
  if (out_dir.empty()) throw ConfigError("output directory must be nonempty");
  for (const std::string& e : tv_elements) {
    const GroupElement g = parse_element(e, spec.rank());
    if (!spec.wreath() && !g.lamps.empty()) {
      throw ConfigError("element '" + e + "' has lamps but the group has none");
    }
  }
}

std::string RunConfig::canonical_text() const {
  // Only behavior-determining fields enter the digest: the preset label is
  // shorthand for fields already listed, and the output directory is a
  // location, so one experiment relocated stays byte-identical.
  std::ostringstream os;
  os << "config{spec=" << spec.canonical_string()
     << ";schedule=" << schedule.canonical_string()
     << ";seed=" << seed << ";levels=" << levels << ";k_max=" << k_max
     << ";horizon=" << horizon << ";horizons=";
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (i) os << ",";
    os << horizons[i];
  }
  os << ";n_traj=" << n_traj << ";traj_len=" << traj_len
     << ";tv_n_max=" << tv_n_max << ";tv_elements=";
  for (std::size_t i = 0; i < tv_elements.size(); ++i) {
    if (i) os << "|";
    os << tv_elements[i];
  }
  os << ";min_freq=" << precise(min_freq) << ";tau_level=" << tau_level
     << "}";
  return os.str();
}

std::string RunConfig::digest() const { return digest_hex(fnv1a(canonical_text())); }

std::string RunConfig::to_json() const {
  json g;
  g["family"] = spec.wreath() ? "lamplighter" : "free_abelian";
  g["base_rank"] = spec.base_rank;

  json s;
  s["name"] = schedule.name;
  s["folner_power"] = {schedule.folner_power.mul, schedule.folner_power.add};
  s["lock_power"] = {schedule.lock_power.mul, schedule.lock_power.add};
  s["w_power"] = {schedule.w_power.mul, schedule.w_power.add};
  s["delta_denom"] = {schedule.delta_denom.mul, schedule.delta_denom.add};
  s["caps"] = {{"set_cap", schedule.caps.set_cap},
               {"lock_enum_horizon", schedule.caps.lock_enum_horizon},
               {"marker_slack_max", schedule.caps.marker_slack_max},
               {"folner_diag_max", schedule.caps.folner_diag_max}};

  json j;
  j["preset"] = preset;
  j["group"] = g;
  j["schedule"] = s;
  j["seed"] = seed;
  j["levels"] = levels;
  j["k_max"] = k_max;
  j["horizon"] = horizon;
  j["horizons"] = horizons;
  j["trajectories"] = n_traj;
  j["trajectory_length"] = traj_len;
  j["tv_powers"] = tv_n_max;
  j["tv_elements"] = tv_elements;
  j["min_freq"] = min_freq;
  j["tau_level"] = tau_level;
  j["out"] = out_dir;
  return j.dump(2) + "\n";
}

RunConfig RunConfig::preset_desk() {
  RunConfig c;
  c.preset = "desk";
  return c;
}

RunConfig RunConfig::preset_paper() {
  RunConfig c;
  c.preset = "paper";
  c.schedule = GrowthSchedule::paper();
  return c;
}

RunConfig RunConfig::preset_abelian() {
  RunConfig c;
  c.preset = "abelian";
  c.spec = GroupSpec::free_abelian(1);
  c.tv_elements = {"(1,[])", "(2,[])"};
  return c;
}

RunConfig RunConfig::by_preset(const std::string& name) {
  if (name == "desk") return preset_desk();
  if (name == "paper") return preset_paper();
  if (name == "abelian") return preset_abelian();
  throw ConfigError("unknown preset '" + name +
                    "' (available: desk, paper, abelian)");
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  require_keys(j,
               {"preset", "group", "schedule", "seed", "levels", "k_max",
                "horizon", "horizons", "trajectories", "trajectory_length",
                "tv_powers", "tv_elements", "min_freq", "tau_level", "out"},
               "config");
  RunConfig c = j.contains("preset")
                    ? by_preset(j["preset"].is_string()
                                    ? j["preset"].get<std::string>()
                                    : throw ConfigError(
                                          "preset must be a string"))
                    : preset_desk();
  if (j.contains("group")) c.spec = parse_group(j["group"]);
  if (j.contains("schedule")) c.schedule = parse_schedule(j["schedule"]);
  if (j.contains("seed")) c.seed = as_u64(j["seed"], "seed");
  if (j.contains("levels")) c.levels = as_i64(j["levels"], "levels");
  if (j.contains("k_max")) c.k_max = as_i64(j["k_max"], "k_max");
  if (j.contains("horizon")) c.horizon = as_count(j["horizon"], "horizon");
  if (j.contains("horizons")) {
    if (!j["horizons"].is_array()) {
      throw ConfigError("horizons must be an array");
    }
    c.horizons.clear();
    for (const json& h : j["horizons"]) {
      c.horizons.push_back(as_count(h, "horizons entry"));
    }
  }
  if (j.contains("trajectories")) {
    c.n_traj = as_count(j["trajectories"], "trajectories");
  }
  if (j.contains("trajectory_length")) {
    c.traj_len = as_count(j["trajectory_length"], "trajectory_length");
  }
  if (j.contains("tv_powers")) c.tv_n_max = as_count(j["tv_powers"], "tv_powers");
  if (j.contains("tv_elements")) {
    if (!j["tv_elements"].is_array()) {
      throw ConfigError("tv_elements must be an array of element strings");
    }
    c.tv_elements.clear();
    for (const json& e : j["tv_elements"]) {
      if (!e.is_string()) {
        throw ConfigError("tv_elements entries must be strings");
      }
      c.tv_elements.push_back(e.get<std::string>());
    }
  }
  if (j.contains("min_freq")) {
    if (!j["min_freq"].is_number()) {
      throw ConfigError("min_freq must be a number");
    }
    c.min_freq = j["min_freq"].get<double>();
  }
  if (j.contains("tau_level")) {
    c.tau_level = as_count(j["tau_level"], "tau_level");
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out must be a string");
    c.out_dir = j["out"].get<std::string>();
  }
  c.validate();
  return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  return from_json_text(read_text_file(path));
}

}  // namespace lampwalk
