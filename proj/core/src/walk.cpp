#include "lampwalk/walk.hpp"

#include <cmath>

#include "lampwalk/errors.hpp"

namespace lampwalk {

std::string Trajectory::seed_token() const {
  return std::to_string(master_seed) + "/" + std::to_string(index);
}

u128 sample_k(RandomStream& rng, const KLaw& law) {
  return law.quantile(rng.next_unit());
}

Color sample_y(RandomStream& rng, u128 k) {
  return rng.next_unit() < red_probability(k) ? Color::red : Color::blue;
}

Step sample_step(RandomStream& rng, const KLaw& law, const Construction& cons) {
  Step s;
  s.k = sample_k(rng, law);
  s.y = sample_y(rng, s.k);
  const double ux = rng.next_unit();  // always drawn: stream alignment
  const u128 depth = static_cast<u128>(cons.depth());
  s.x = identity(cons.spec.rank());
  s.resolved = s.k >= 1 && s.k <= depth;
  if (!s.resolved) return s;
  const ConstructionLevel& lvl = cons.level(static_cast<std::size_t>(s.k));
  if (s.y == Color::red) {
    s.x = lvl.c;
  } else {
    const std::size_t n = lvl.bF_inv.size();
    std::size_t idx = static_cast<std::size_t>(ux * static_cast<double>(n));
    if (idx >= n) idx = n - 1;
    s.x = lvl.bF_inv[idx];
  }
  return s;
}

Trajectory sample_trajectory(std::uint64_t master_seed, std::uint64_t index,
                             std::size_t n, const Construction& cons,
                             const KLaw& law) {
  if (n < 1) throw ConfigError("trajectory length must be at least 1");
  Trajectory t;
  t.master_seed = master_seed;
  t.index = index;
  t.steps.reserve(n);
  RandomStream rng(master_seed, index);
  for (std::size_t i = 0; i < n; ++i) t.steps.push_back(sample_step(rng, law, cons));
  return t;
}

namespace {

std::vector<GroupElement> prefix_products(const Trajectory& t,
                                          const GroupSpec& spec,
                                          bool left_to_right) {
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (!t.steps[i].resolved) {
      throw UnresolvedStepError("prefix products need every step resolved",
                                i + 1);
    }
  }
  std::vector<GroupElement> out;
  out.reserve(t.steps.size());
  GroupElement z = identity(spec.rank());
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    z = left_to_right ? mul(z, t.steps[i].x) : mul(t.steps[i].x, z);
    out.push_back(z);
  }
  return out;
}

}  // namespace

std::vector<GroupElement> right_products(const Trajectory& t,
                                         const GroupSpec& spec) {
  return prefix_products(t, spec, true);
}

std::vector<GroupElement> left_products(const Trajectory& t,
                                        const GroupSpec& spec) {
  return prefix_products(t, spec, false);
}

bool step_valid(const Step& s, const Construction& cons) {
  if (s.k < 1 || s.k > static_cast<u128>(cons.depth())) return false;
  if (!s.resolved) return false;
  const ConstructionLevel& lvl = cons.level(static_cast<std::size_t>(s.k));
  if (s.y == Color::red) return s.x == lvl.c;
  return lvl.bF_inv.contains(s.x);
}

double step_probability(const Step& s, const Construction& cons,
                        const KLaw& law) {
  if (!step_valid(s, cons)) {
    throw ConfigError("step probability requested for a step the sampler "
                      "cannot emit");
  }
  const ConstructionLevel& lvl = cons.level(static_cast<std::size_t>(s.k));
  const double pk = law.pmf(s.k);
  const double red = red_probability(s.k);
  if (s.y == Color::red) return pk * red;
  return pk * (1.0 - red) / static_cast<double>(lvl.bF_inv.size());
}

}  // namespace lampwalk
