#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lampwalk/construction.hpp"
#include "lampwalk/element.hpp"
#include "lampwalk/klaw.hpp"
#include "lampwalk/rng.hpp"
#include "lampwalk/u128.hpp"

namespace lampwalk {

enum class Color { red, blue };

inline const char* color_name(Color c) { return c == Color::red ? "red" : "blue"; }

// One step of the coupled process: a level draw k, a color, and a group
// increment x. When k exceeds the built construction depth the increment
// cannot be materialized; the step then carries resolved = false and x is
// the identity placeholder (k and y are always exact).
struct Step {
  u128 k = 1;
  Color y = Color::blue;
  bool resolved = false;
  GroupElement x;
};

struct Trajectory {
  std::uint64_t master_seed = 0;
  std::uint64_t index = 0;
  std::vector<Step> steps;

  std::string seed_token() const;
};

// Level law draw via inverse CDF; consumes exactly one uniform.
u128 sample_k(RandomStream& rng, const KLaw& law);

// Color draw: red with probability 2^(-k); consumes exactly one uniform.
Color sample_y(RandomStream& rng, u128 k);

// One step. Consumes exactly three uniforms (k, y, x) regardless of color or
// resolvability, so streams stay aligned across schedules of different depth.
Step sample_step(RandomStream& rng, const KLaw& law, const Construction& cons);

// n steps on the stream derived from (master_seed, index).
Trajectory sample_trajectory(std::uint64_t master_seed, std::uint64_t index,
                             std::size_t n, const Construction& cons,
                             const KLaw& law);

// Prefix products Z_i = x_1 ... x_i (i = 1..n). Throws UnresolvedStepError
// naming the first unresolved step.
std::vector<GroupElement> right_products(const Trajectory& t,
                                         const GroupSpec& spec);

// Prefix products Z'_i = x_i ... x_1 (i = 1..n). Same error contract.
std::vector<GroupElement> left_products(const Trajectory& t,
                                        const GroupSpec& spec);

// Whether the step's (k, y, x) triple is one the sampler can emit: k within
// the built depth, and x = c_k (red) or x in b_k F_k^{-1} (blue).
bool step_valid(const Step& s, const Construction& cons);

// Exact sampler probability of the triple: pmf(k) * 2^(-k) for red,
// pmf(k) * (1 - 2^(-k)) / |b_k F_k^{-1}| for blue. Requires step_valid.
double step_probability(const Step& s, const Construction& cons,
                        const KLaw& law);

}  // namespace lampwalk
