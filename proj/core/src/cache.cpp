#include "lampwalk/cache.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "lampwalk/digest.hpp"
#include "lampwalk/element.hpp"
#include "lampwalk/errors.hpp"

namespace lampwalk {

namespace {

constexpr const char* kVersionLine = "lampwalk-cache v1";

void emit_set(std::ostringstream& os, const char* name, const ElementSet& s) {
  os << name << " " << s.size() << "\n";
  for (const GroupElement& g : s) os << format_element(g) << "\n";
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : is_(text) {}

  std::string next(const std::string& what) {
    std::string line;
    if (!std::getline(is_, line)) {
      throw ConfigError("cache file truncated: expected " + what);
    }
    ++line_no_;
    return line;
  }

  // Next line must start with "<key> "; returns the rest.
  std::string field(const std::string& key) {
    const std::string line = next(key);
    const std::string prefix = key + " ";
    if (line.rfind(prefix, 0) != 0) {
      throw ConfigError("cache file line " + std::to_string(line_no_) +
                        ": expected '" + key + " ...', got '" + line + "'");
    }
    return line.substr(prefix.size());
  }

  void literal(const std::string& expected) {
    const std::string line = next("'" + expected + "'");
    if (line != expected) {
      throw ConfigError("cache file line " + std::to_string(line_no_) +
                        ": expected '" + expected + "', got '" + line + "'");
    }
  }

 private:
  std::istringstream is_;
  std::size_t line_no_ = 0;
};

std::size_t parse_count(const std::string& s) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("cache file: bad count '" + s + "'");
  }
}

ElementSet read_set(LineReader& r, const char* name, int rank) {
  const std::size_t n = parse_count(r.field(name));
  std::vector<GroupElement> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    items.push_back(parse_element(r.next("element"), rank));
  }
  ElementSet s = ElementSet::from_unsorted(std::move(items));
  if (s.size() != n) {
    throw ConfigError(std::string("cache file: duplicate elements in ") + name);
  }
  return s;
}

}  // namespace

std::string cache_to_text(const Construction& c,
                          const std::string& config_digest) {
  std::ostringstream os;
  os << kVersionLine << "\n";
  os << "config " << config_digest << "\n";
  os << "spec-digest " << digest_hex(c.spec.digest()) << "\n";
  os << "spec " << c.spec.canonical_string() << "\n";
  os << "schedule-digest " << digest_hex(c.schedule.digest()) << "\n";
  os << "schedule " << c.schedule.canonical_string() << "\n";
  os << "levels " << c.depth() << "\n";
  for (const ConstructionLevel& lvl : c.levels) {
    os << "level " << lvl.index << "\n";
    os << "c " << format_element(lvl.c) << "\n";
    os << "b " << format_element(lvl.b) << "\n";
    emit_set(os, "A", lvl.A);
    emit_set(os, "F", lvl.F);
    emit_set(os, "D", lvl.D);
    os << "end level " << lvl.index << "\n";
  }
  os << "end cache\n";
  return os.str();
}

Construction cache_from_text(const std::string& text, const GroupSpec& spec,
                             const GrowthSchedule& schedule) {
  spec.validate();
  schedule.validate();
  LineReader r(text);
  r.literal(kVersionLine);
  r.field("config");  // informational; cache validity is keyed below
  const std::string spec_digest = r.field("spec-digest");
  const std::string spec_text = r.field("spec");
  const std::string sched_digest = r.field("schedule-digest");
  const std::string sched_text = r.field("schedule");
  if (spec_digest != digest_hex(spec.digest()) ||
      spec_text != spec.canonical_string()) {
    throw ConfigError(
        "cache was built for a different group spec (digest " + spec_digest +
        ", expected " + digest_hex(spec.digest()) + ")");
  }
  if (sched_digest != digest_hex(schedule.digest()) ||
      sched_text != schedule.canonical_string()) {
    throw ConfigError(
        "cache was built for a different schedule (digest " + sched_digest +
        ", expected " + digest_hex(schedule.digest()) + ")");
  }
  const std::size_t levels = parse_count(r.field("levels"));
  if (levels < 1) throw ConfigError("cache file: no levels");

  Construction c;
  c.spec = spec;
  c.schedule = schedule;
  const int rank = spec.rank();
  for (std::size_t i = 1; i <= levels; ++i) {
    r.literal("level " + std::to_string(i));
    ConstructionLevel lvl;
    lvl.index = static_cast<std::int64_t>(i);
    lvl.c = parse_element(r.field("c"), rank);
    lvl.b = parse_element(r.field("b"), rank);
    lvl.A = read_set(r, "A", rank);
    lvl.F = read_set(r, "F", rank);
    lvl.D = read_set(r, "D", rank);
    r.literal("end level " + std::to_string(i));
    derive_level_sets(lvl);
    c.levels.push_back(std::move(lvl));
  }
  r.literal("end cache");
  return c;
}

}  // namespace lampwalk
