#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lampwalk/construction.hpp"
#include "lampwalk/element.hpp"
#include "lampwalk/klaw.hpp"
#include "lampwalk/measure.hpp"
#include "lampwalk/packed_measure.hpp"
#include "lampwalk/tail.hpp"
#include "lampwalk/walk.hpp"

namespace lampwalk {

// Total-variation figures use the l1 convention on atom masses (maximum 2);
// every emitted report states this.
inline constexpr const char* kTvConventionNote =
    "total variation is the l1 norm on atom masses (maximum 2)";

// Convolution powers beyond the shared set cap are still useful for the
// decay curve; this is the dedicated, larger support bound for measures.
inline constexpr std::size_t kMeasureSupportCap = 6'000'000;

// One point of a total-variation comparison. value is the l1 distance over
// the union of atom supports; error_bound is the mass-deficit contribution
// (d1 + d2) and must always be reported alongside value. For decay curves,
// paper_bound = 4/n + 4*eta(n) with eta the exact residual bound from the
// level law, and deficit_bound = 4/n + 4*(accumulated deficit).
struct TvEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t n = 0;
  GroupElement g;
  double paper_bound = 0.0;
  double deficit_bound = 0.0;
};

TvEstimate tv_distance(const TruncatedMeasure& m1, const TruncatedMeasure& m2);

// Exact decay data for the left walk: convolution powers of the inverted
// step measure, with per-element translation distances answered from a
// packed fast path (rank-1 wreath) or the naive path otherwise.
class LeftWalkEngine {
 public:
  LeftWalkEngine(const Construction& cons, std::size_t k_max, const KLaw& law,
                 std::size_t n_max,
                 std::size_t support_cap = kMeasureSupportCap);

  std::size_t powers() const { return completed_; }
  double deficit(std::size_t n) const;
  double eta(std::size_t n) const;

  TvEstimate estimate(const GroupElement& g, std::size_t n) const;
  std::vector<TvEstimate> curve(const GroupElement& g) const;

 private:
  bool packed_ = false;
  std::size_t completed_ = 0;
  std::vector<double> etas_;
  std::vector<double> deficits_;
  std::vector<std::unique_ptr<PackedMeasure>> packed_powers_;
  std::vector<std::unique_ptr<PackedIndex>> packed_indexes_;
  std::vector<TruncatedMeasure> naive_powers_;
};

// TvEstimate per n = 1..n_max for one g. A cardinality cap hit partway is
// rethrown carrying the last completed power.
std::vector<TvEstimate> left_walk_tv_curve(const GroupElement& g,
                                           std::size_t n_max,
                                           const Construction& cons,
                                           std::size_t k_max, const KLaw& law);

// Empirical law of the tail functional at one level. counts holds resolved
// values; none_count holds trajectories whose tail is certified but has no
// entry at this level; unresolved holds trajectories that are uncertified at
// the horizon or whose entry at this level could not be resolved.
struct TauHistogram {
  std::size_t level = 0;
  std::map<GroupElement, std::size_t> counts;
  std::size_t none_count = 0;
  std::size_t unresolved = 0;

  std::size_t total() const;
};

// Adds one trajectory's tail outcome (tau result at the histogram's level).
void accumulate_tau(TauHistogram& h, const std::optional<TailValue>& tv);

TauHistogram tau_histogram(const std::vector<Trajectory>& trajs,
                           std::size_t level, const TailContext& ctx,
                           std::size_t horizon);

struct NondegeneracyReport {
  bool pass = false;
  double min_freq = 0.0;
  std::size_t resolved_total = 0;  // total - unresolved (includes none-valued)

  struct TopValue {
    GroupElement value;
    std::size_t count = 0;
    double freq = 0.0;
  };
  std::vector<TopValue> top;  // up to the two heaviest values
};

// Pass iff at least two distinct values each have frequency >= min_freq
// among the resolved trajectories. Requires at least 100 resolved.
NondegeneracyReport nondegeneracy_test(const TauHistogram& h, double min_freq);

// Two perturbed copies of one trajectory batch: every trajectory's first
// step is replaced by step_a (ensemble A) and by step_b (ensemble B). The
// level sequences agree, so certification is common; the tail histograms at
// the probed level land in disjoint bins when the replacements differ.
struct PerturbationOutcome {
  TauHistogram hist_a;
  TauHistogram hist_b;
  TauHistogram pooled;
  std::size_t certified = 0;  // certified at the horizon (common to A and B)
  bool bins_disjoint = false;
  bool ratios_consistent = false;  // per-trajectory ratio pairs agree exactly
  NondegeneracyReport nondegeneracy;  // on the pooled histogram
};

PerturbationOutcome run_perturbation_experiment(
    const Construction& cons, const KLaw& law, const TailContext& ctx,
    std::uint64_t master_seed, std::size_t n_traj, std::size_t traj_len,
    std::size_t horizon, std::size_t level, const Step& step_a,
    const Step& step_b, double min_freq);

}  // namespace lampwalk
