#pragma once

#include <cstdint>
#include <vector>

#include "lampwalk/construction.hpp"
#include "lampwalk/element.hpp"
#include "lampwalk/element_set.hpp"
#include "lampwalk/klaw.hpp"

namespace lampwalk {

// Finitely-supported approximation of a probability measure on the group,
// with the unrepresented mass tracked exactly as `deficit`.
// Atoms are kept sorted by element so iteration and serialization are
// deterministic; masses are strictly positive.
struct TruncatedMeasure {
  std::vector<GroupElement> support;
  std::vector<double> mass;
  double deficit = 0.0;

  std::size_t size() const { return support.size(); }
  double total_mass() const;
  // Mass at g, 0 when g is not an atom.
  double at(const GroupElement& g) const;
  // Throws VerificationError unless masses are positive and
  // total + deficit == 1 within tol.
  void validate(double tol = 1e-12) const;
};

TruncatedMeasure dirac(const GroupElement& g);
TruncatedMeasure uniform_on(const ElementSet& F);
// Aggregates (element, mass) pairs, summing duplicates and dropping zeros.
TruncatedMeasure aggregate_measure(
    std::vector<std::pair<GroupElement, double>> atoms, double deficit);

// The step-distribution truncated at draw values <= k_max: level i puts mass
// pmf(i) * 2^-i on c_i and pmf(i) * (1 - 2^-i) / |F_i| on each element of
// b_i F_i^-1; deficit = P(draw > k_max).
TruncatedMeasure measure_atoms(const Construction& c, std::int64_t k_max,
                               const KLaw& law);

// Opposite measure: same masses on inverted atoms.
TruncatedMeasure invert_measure(const TruncatedMeasure& m);
// Pushforward x -> g x.
TruncatedMeasure left_translate(const GroupElement& g,
                                const TruncatedMeasure& m);

// Exact convolution: (m1 * m2)(z) = sum over xy = z of m1(x) m2(y);
// deficit composes as 1 - (1-d1)(1-d2). ResourceLimitError over cap.
TruncatedMeasure convolve(const TruncatedMeasure& m1,
                          const TruncatedMeasure& m2,
                          std::size_t cap = kDefaultSetCap);

// l1 distance over the union of supports (maximum value 2).
double tv_atoms(const TruncatedMeasure& m1, const TruncatedMeasure& m2);

}  // namespace lampwalk
