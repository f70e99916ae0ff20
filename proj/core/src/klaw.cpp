#include "lampwalk/klaw.hpp"

#include <algorithm>
#include <cmath>

#include "lampwalk/errors.hpp"

namespace lampwalk {

namespace {

constexpr double kExponent = 1.25;  // tail exponent s in k^(-s)
constexpr std::size_t kTableSize = 16384;
constexpr std::size_t kNormalizerTerms = 65536;

// sum_{j >= m} j^(-s): explicit terms up to max(m, 64), then the
// Euler-Maclaurin expansion, whose truncation error is far below 1e-16
// relative at that point.
long double power_sum_tail(long double m) {
  const long double s = kExponent;
  long double acc = 0.0L;
  long double from = m;
  const long double kSwitch = 64.0L;
  while (from < kSwitch) {
    acc += std::pow(from, -s);
    from += 1.0L;
  }
  const long double em = std::pow(from, 1.0L - s) / (s - 1.0L) +
                         std::pow(from, -s) / 2.0L +
                         s * std::pow(from, -s - 1.0L) / 12.0L -
                         s * (s + 1.0L) * (s + 2.0L) *
                             std::pow(from, -s - 3.0L) / 720.0L;
  return acc + em;
}

}  // namespace

KLaw::KLaw() {
  long double partial = 0.0L;
  std::vector<long double> partials;
  partials.reserve(kNormalizerTerms);
  for (std::size_t k = 1; k <= kNormalizerTerms; ++k) {
    partial += std::pow(static_cast<long double>(k), -(long double)kExponent);
    partials.push_back(partial);
  }
  const long double c_exact =
      partial + power_sum_tail(static_cast<long double>(kNormalizerTerms + 1));
  c_ = static_cast<double>(c_exact);
  cdf_table_.resize(kTableSize);
  for (std::size_t k = 1; k <= kTableSize; ++k) {
    cdf_table_[k - 1] = static_cast<double>(partials[k - 1] / c_exact);
  }
}

double KLaw::pmf(double k) const { return std::pow(k, -kExponent) / c_; }

double KLaw::pmf(u128 k) const { return pmf(u128_to_double(k)); }

double KLaw::tail(double m) const {
  if (m <= 1.0) return 1.0;
  return static_cast<double>(power_sum_tail(static_cast<long double>(m)) /
                             static_cast<long double>(c_));
}

double KLaw::cdf(double k) const {
  if (k < 1.0) return 0.0;
  if (k <= static_cast<double>(kTableSize)) {
    return cdf_table_[static_cast<std::size_t>(k) - 1];
  }
  return 1.0 - tail(k + 1.0);
}

u128 KLaw::quantile(double u) const {
  if (u < cdf_table_.front()) return 1;
  if (u < cdf_table_.back()) {
    // Smallest k with u < CDF(k).
    const auto it =
        std::upper_bound(cdf_table_.begin(), cdf_table_.end(), u);
    return static_cast<u128>(it - cdf_table_.begin()) + 1;
  }
  // Deep tail: smallest k with tail(k+1) < 1-u, by exponential then binary
  // search on the monotone tail formula. 1-u is exact in double for u >= 0.5.
  const double t = 1.0 - u;
  u128 lo = kTableSize;  // tail(lo+1) >= t here
  u128 hi = kTableSize;
  for (;;) {
    if (hi >= kSaturation) {
      hi = kSaturation;
      break;
    }
    hi *= 2;
    if (tail(u128_to_double(hi) + 1.0) < t) break;
    lo = hi;
  }
  while (hi - lo > 1) {
    const u128 mid = lo + (hi - lo) / 2;
    if (tail(u128_to_double(mid) + 1.0) < t) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double KLaw::prob_max_le(std::size_t n) const {
  return std::pow(cdf(static_cast<double>(n)), static_cast<double>(n));
}

double KLaw::eta_upper(int n) const {
  if (n < 1) throw ConfigError("eta bound requires n >= 1");
  const auto it = eta_cache_.find(n);
  if (it != eta_cache_.end()) return it->second;
  constexpr std::size_t kCutoff = 10'000'000;
  const long double cl = static_cast<long double>(c_);
  long double covered = 0.0L;
  long double cdf_prev = 0.0L;  // CDF(k-1) while processing k
  for (std::size_t k = 1; k <= kCutoff; ++k) {
    const long double pmf_k =
        std::pow(static_cast<long double>(k), -(long double)kExponent) / cl;
    if (k > static_cast<std::size_t>(n)) {
      const long double blue =
          k <= 1074 ? 1.0L - std::pow(0.5L, static_cast<long double>(k))
                    : 1.0L;
      covered += static_cast<long double>(n) *
                 std::pow(cdf_prev, static_cast<long double>(n - 1)) * pmf_k *
                 blue;
    }
    cdf_prev += pmf_k;
  }
  // Guaranteed lower bound on the k > cutoff part of the covered mass, so the
  // returned eta stays an upper bound.
  const long double rem_lower =
      static_cast<long double>(n) *
      std::pow(cdf_prev, static_cast<long double>(n - 1)) *
      (power_sum_tail(static_cast<long double>(kCutoff + 1)) / cl);
  double eta = static_cast<double>(1.0L - covered - rem_lower);
  eta = std::clamp(eta, 0.0, 1.0);
  eta_cache_[n] = eta;
  return eta;
}

double red_probability(u128 k) {
  if (k > 1074) return 0.0;
  return std::ldexp(1.0, -static_cast<int>(k));
}

double chi2_upper_critical(int df, double alpha) {
  if (df < 2 || df % 2 != 0) {
    throw ConfigError("exact chi-square critical value requires even df");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("chi-square alpha must lie in (0, 1)");
  }
  const int m = df / 2;
  const auto upper_tail = [m](long double x) {
    const long double t = x / 2.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int j = 1; j < m; ++j) {
      term *= t / static_cast<long double>(j);
      sum += term;
    }
    return std::exp(-t) * sum;
  };
  long double lo = 0.0L;
  long double hi = static_cast<long double>(df);
  while (upper_tail(hi) > static_cast<long double>(alpha)) hi *= 2.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = (lo + hi) / 2.0L;
    if (upper_tail(mid) > static_cast<long double>(alpha)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>((lo + hi) / 2.0L);
}

}  // namespace lampwalk
