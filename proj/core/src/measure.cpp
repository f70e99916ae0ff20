#include "lampwalk/measure.hpp"

#include <algorithm>
#include <cmath>

#include "lampwalk/errors.hpp"

namespace lampwalk {

double TruncatedMeasure::total_mass() const {
  double s = 0.0;
  for (const double m : mass) s += m;
  return s;
}

double TruncatedMeasure::at(const GroupElement& g) const {
  const auto it = std::lower_bound(support.begin(), support.end(), g);
  if (it == support.end() || !(*it == g)) return 0.0;
  return mass[static_cast<std::size_t>(it - support.begin())];
}

void TruncatedMeasure::validate(double tol) const {
  if (support.size() != mass.size()) {
    throw VerificationError("measure support/mass arrays disagree in length");
  }
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end()) {
    throw VerificationError("measure support is not sorted-unique");
  }
  for (const double m : mass) {
    if (!(m > 0.0)) throw VerificationError("measure has a non-positive atom");
  }
  if (deficit < 0.0) throw VerificationError("measure deficit is negative");
  const double total = total_mass() + deficit;
  if (std::abs(total - 1.0) > tol) {
    throw VerificationError("measure mass + deficit is off unity by " +
                            std::to_string(total - 1.0));
  }
}

TruncatedMeasure dirac(const GroupElement& g) {
  TruncatedMeasure m;
  m.support = {g};
  m.mass = {1.0};
  return m;
}

TruncatedMeasure uniform_on(const ElementSet& F) {
  if (F.empty()) throw ConfigError("uniform measure requires a nonempty set");
  TruncatedMeasure m;
  m.support.assign(F.begin(), F.end());
  m.mass.assign(F.size(), 1.0 / static_cast<double>(F.size()));
  return m;
}

TruncatedMeasure aggregate_measure(
    std::vector<std::pair<GroupElement, double>> atoms, double deficit) {
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  TruncatedMeasure m;
  m.deficit = deficit;
  for (std::size_t i = 0; i < atoms.size();) {
    double w = atoms[i].second;
    std::size_t j = i + 1;
    while (j < atoms.size() && atoms[j].first == atoms[i].first) {
      w += atoms[j].second;
      ++j;
    }
    if (w > 0.0) {
      m.support.push_back(std::move(atoms[i].first));
      m.mass.push_back(w);
    }
    i = j;
  }
  return m;
}

TruncatedMeasure measure_atoms(const Construction& c, std::int64_t k_max,
                               const KLaw& law) {
  if (k_max < 1 || k_max > c.depth()) {
    throw ConfigError("measure truncation must lie within the built levels");
  }
  std::vector<std::pair<GroupElement, double>> atoms;
  for (std::int64_t i = 1; i <= k_max; ++i) {
    const ConstructionLevel& lvl = c.level(i);
    const double p = law.pmf(static_cast<double>(i));
    const double red = red_probability(static_cast<u128>(i));
    atoms.emplace_back(lvl.c, p * red);
    const double each =
        p * (1.0 - red) / static_cast<double>(lvl.bF_inv.size());
    for (const GroupElement& g : lvl.bF_inv) atoms.emplace_back(g, each);
  }
  TruncatedMeasure m = aggregate_measure(
      std::move(atoms), law.tail(static_cast<double>(k_max + 1)));
  m.validate();
  return m;
}

TruncatedMeasure invert_measure(const TruncatedMeasure& m) {
  std::vector<std::pair<GroupElement, double>> atoms;
  atoms.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    atoms.emplace_back(inv(m.support[i]), m.mass[i]);
  }
  return aggregate_measure(std::move(atoms), m.deficit);
}

TruncatedMeasure left_translate(const GroupElement& g,
                                const TruncatedMeasure& m) {
  std::vector<std::pair<GroupElement, double>> atoms;
  atoms.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    atoms.emplace_back(mul(g, m.support[i]), m.mass[i]);
  }
  return aggregate_measure(std::move(atoms), m.deficit);
}

TruncatedMeasure convolve(const TruncatedMeasure& m1,
                          const TruncatedMeasure& m2, std::size_t cap) {
  std::vector<std::pair<GroupElement, double>> atoms;
  const std::size_t pairs = m1.size() * m2.size();
  const bool grid_overflow =
      m1.size() != 0 && pairs / m1.size() != m2.size();
  if (grid_overflow || pairs > 50'000'000) {
    throw ResourceLimitError("convolution pair grid too large",
                             grid_overflow ? cap + 1 : pairs);
  }
  atoms.reserve(pairs);
  for (std::size_t i = 0; i < m1.size(); ++i) {
    for (std::size_t j = 0; j < m2.size(); ++j) {
      atoms.emplace_back(mul(m1.support[i], m2.support[j]),
                         m1.mass[i] * m2.mass[j]);
    }
  }
  const double deficit = 1.0 - (1.0 - m1.deficit) * (1.0 - m2.deficit);
  TruncatedMeasure out = aggregate_measure(std::move(atoms), deficit);
  if (out.size() > cap) {
    throw ResourceLimitError("convolution support exceeds the cap",
                             out.size());
  }
  return out;
}

double tv_atoms(const TruncatedMeasure& m1, const TruncatedMeasure& m2) {
  double tv = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < m1.size() && j < m2.size()) {
    if (m1.support[i] < m2.support[j]) {
      tv += m1.mass[i];
      ++i;
    } else if (m2.support[j] < m1.support[i]) {
      tv += m2.mass[j];
      ++j;
    } else {
      tv += std::abs(m1.mass[i] - m2.mass[j]);
      ++i;
      ++j;
    }
  }
  for (; i < m1.size(); ++i) tv += m1.mass[i];
  for (; j < m2.size(); ++j) tv += m2.mass[j];
  return tv;
}

}  // namespace lampwalk
