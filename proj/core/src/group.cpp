#include "lampwalk/group.hpp"

#include <algorithm>
#include <set>

#include "lampwalk/digest.hpp"
#include "lampwalk/errors.hpp"

namespace lampwalk {

GroupSpec GroupSpec::lamplighter(int base_rank) {
  GroupSpec s;
  s.family = GroupFamily::lamplighter;
  s.base_rank = base_rank;
  s.validate();
  return s;
}

GroupSpec GroupSpec::free_abelian(int rank) {
  GroupSpec s;
  s.family = GroupFamily::free_abelian;
  s.base_rank = rank;
  s.validate();
  return s;
}

void GroupSpec::validate() const {
  if (base_rank < 1 || base_rank > 8) {
    throw ConfigError("group base rank must be in [1, 8]");
  }
  if (family == GroupFamily::lamplighter && lamp_modulus != 2) {
    throw ConfigError("only lamp modulus 2 is supported");
  }
  for (const GroupElement& g : generators) {
    if (g.base.size() != static_cast<std::size_t>(base_rank)) {
      throw ConfigError("generator rank does not match the group spec");
    }
    if (!is_canonical(g)) throw ConfigError("generator is not canonical");
    if (!wreath() && !g.lamps.empty()) {
      throw ConfigError("free-abelian generators cannot carry lamps");
    }
  }
}

std::string GroupSpec::family_name() const {
  return wreath() ? "lamplighter" : "free-abelian";
}

std::vector<GroupElement> GroupSpec::effective_generators() const {
  if (!generators.empty()) return generators;
  std::vector<GroupElement> gens;
  for (int i = 0; i < base_rank; ++i) {
    GroupElement g = identity(base_rank);
    g.base[static_cast<std::size_t>(i)] = 1;
    gens.push_back(std::move(g));
  }
  if (wreath()) {
    GroupElement lamp = identity(base_rank);
    lamp.lamps = {0};
    gens.push_back(std::move(lamp));
  }
  return gens;
}

GroupSpec GroupSpec::factor() const {
  if (factor_is_identity()) return *this;
  GroupSpec f;
  f.family = GroupFamily::lamplighter;
  f.base_rank = 1;
  f.lamp_modulus = lamp_modulus;
  return f;
}

std::string GroupSpec::canonical_string() const {
  std::string s = "group{family=" + family_name() +
                  ";rank=" + std::to_string(base_rank) +
                  ";modulus=" + std::to_string(lamp_modulus) + ";gens=";
  for (const GroupElement& g : effective_generators()) s += format_element(g);
  s += "}";
  return s;
}

std::uint64_t GroupSpec::digest() const { return fnv1a(canonical_string()); }

GroupElement phi(const GroupElement& a, const GroupSpec& spec) {
  if (spec.factor_is_identity()) return a;
  GroupElement r;
  r.base.assign(a.base.end() - 1, a.base.end());
  r.lamps = a.lamps;
  return r;
}

std::vector<GroupElement> enumerate_elements(const GroupSpec& spec,
                                             std::size_t n) {
  spec.validate();
  std::vector<GroupElement> alphabet;
  for (const GroupElement& g : spec.effective_generators()) {
    alphabet.push_back(g);
    alphabet.push_back(inv(g));
  }
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()),
                 alphabet.end());

  std::vector<GroupElement> out;
  out.reserve(n);
  std::set<GroupElement> seen;
  std::vector<GroupElement> layer{identity(spec.base_rank)};
  seen.insert(layer.front());
  while (out.size() < n) {
    for (const GroupElement& g : layer) {
      out.push_back(g);
      if (out.size() == n) return out;
    }
    std::vector<GroupElement> next;
    for (const GroupElement& g : layer) {
      for (const GroupElement& a : alphabet) {
        GroupElement h = mul(g, a);
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    }
    std::sort(next.begin(), next.end());
    if (next.empty()) {
      throw ConfigError(
          "generators stopped producing new elements before the requested "
          "enumeration length; they do not generate an infinite group");
    }
    layer = std::move(next);
  }
  return out;
}

}  // namespace lampwalk
