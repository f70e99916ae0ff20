#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "lampwalk/u128.hpp"

namespace lampwalk {

// The heavy-tailed step-depth law P(K = k) = (1/c) k^(-5/4), k >= 1, with
// c = sum_k k^(-5/4). All quantities are computed, never hard-coded: c and
// the cumulative table come from partial sums plus an Euler-Maclaurin tail
// bound with relative error below 1e-13. Because table entries and uniform
// draws are doubles, the realized sampling law can differ from the exact law
// by at most ~1e-15 per atom; this is the documented law error.
class KLaw {
 public:
  KLaw();

  double c() const { return c_; }
  double pmf(u128 k) const;
  double pmf(double k) const;
  // P(K <= k); exact partial-sum table for small k, tail formula beyond.
  double cdf(double k) const;
  // P(K >= m) for m >= 1.
  double tail(double m) const;

  // Inverse-transform sampling: smallest k with u < CDF(k). Unbounded
  // support; values above kSaturation (probability ~3e-10 per draw) are
  // clamped to kSaturation and should be counted by the caller.
  static constexpr u128 kSaturation = static_cast<u128>(1) << 126;
  u128 quantile(double u) const;

  // Exact P(max of n independent draws <= n) = CDF(n)^n.
  double prob_max_le(std::size_t n) const;

  // Upper bound on the mass eta_n not covered by the unique-blue-record
  // decomposition event at depth n: the probability that the maximum of n
  // draws fails to be a unique blue record with value above n. Computed as
  //   1 - sum_{k>n} n * pmf(k) * CDF(k-1)^(n-1) * (1 - 2^-k)
  // with the k-sum taken to 1e7 exactly plus a guaranteed lower bound on the
  // remainder, so the result stays a valid upper bound (slack ~1e-3 at n=3).
  double eta_upper(int n) const;

  std::size_t table_size() const { return cdf_table_.size(); }

 private:
  double c_ = 0.0;
  std::vector<double> cdf_table_;  // cdf_table_[k-1] = P(K <= k)
  mutable std::map<int, double> eta_cache_;
};

// Probability that a coupled color draw is red given depth k: 2^(-k),
// evaluating to exactly 0 in double precision for k > 1074.
double red_probability(u128 k);

// Upper critical value of the chi-square distribution with even df at upper
// tail mass alpha, via the exact Erlang closed form
//   Q(x) = exp(-x/2) * sum_{j<df/2} (x/2)^j / j!
// and bisection. Used by the sampler goodness-of-fit gate.
double chi2_upper_critical(int df, double alpha);

}  // namespace lampwalk
