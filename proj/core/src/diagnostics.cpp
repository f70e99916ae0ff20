#include "lampwalk/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "lampwalk/errors.hpp"
#include "lampwalk/group.hpp"

namespace lampwalk {

TvEstimate tv_distance(const TruncatedMeasure& m1, const TruncatedMeasure& m2) {
  TvEstimate e;
  e.value = tv_atoms(m1, m2);
  e.error_bound = m1.deficit + m2.deficit;
  return e;
}

LeftWalkEngine::LeftWalkEngine(const Construction& cons, std::size_t k_max,
                               const KLaw& law, std::size_t n_max,
                               std::size_t support_cap) {
  if (n_max < 1) throw ConfigError("decay curve needs at least one power");
  const TruncatedMeasure step =
      measure_atoms(cons, static_cast<std::int64_t>(k_max), law);
  const TruncatedMeasure base = invert_measure(step);
  packed_ = cons.spec.wreath() && cons.spec.rank() == 1;

  PackedMeasure packed_base;
  if (packed_) packed_base = pack_measure(base);

  for (std::size_t n = 1; n <= n_max; ++n) {
    try {
      if (packed_) {
        auto next = std::make_unique<PackedMeasure>(
            n == 1 ? packed_base
                   : convolve_packed(*packed_powers_.back(), packed_base,
                                     support_cap));
        // The index references the heap-held measure, so moving the
        // unique_ptr into the vector keeps it valid.
        packed_indexes_.push_back(std::make_unique<PackedIndex>(*next));
        packed_powers_.push_back(std::move(next));
        deficits_.push_back(packed_powers_.back()->deficit);
      } else {
        naive_powers_.push_back(
            n == 1 ? base : convolve(naive_powers_.back(), base, support_cap));
        deficits_.push_back(naive_powers_.back().deficit);
      }
      etas_.push_back(law.eta_upper(static_cast<int>(n)));
      completed_ = n;
    } catch (const ResourceLimitError& e) {
      throw ResourceLimitError::wrapped(
          "decay curve stopped after completing power n = " +
              std::to_string(completed_),
          e);
    }
  }
}

double LeftWalkEngine::deficit(std::size_t n) const {
  if (n < 1 || n > completed_) throw ConfigError("power index out of range");
  return deficits_[n - 1];
}

double LeftWalkEngine::eta(std::size_t n) const {
  if (n < 1 || n > completed_) throw ConfigError("power index out of range");
  return etas_[n - 1];
}

TvEstimate LeftWalkEngine::estimate(const GroupElement& g,
                                    std::size_t n) const {
  if (n < 1 || n > completed_) throw ConfigError("power index out of range");
  TvEstimate e;
  e.n = n;
  e.g = g;
  if (packed_) {
    e.value =
        tv_left_translate(g, *packed_powers_[n - 1], *packed_indexes_[n - 1]);
  } else {
    const TruncatedMeasure& mu = naive_powers_[n - 1];
    e.value = tv_atoms(left_translate(g, mu), mu);
  }
  const double d = deficits_[n - 1];
  e.error_bound = 2.0 * d;
  e.paper_bound = 4.0 / static_cast<double>(n) + 4.0 * etas_[n - 1];
  e.deficit_bound = 4.0 / static_cast<double>(n) + 4.0 * d;
  return e;
}

std::vector<TvEstimate> LeftWalkEngine::curve(const GroupElement& g) const {
  std::vector<TvEstimate> out;
  out.reserve(completed_);
  for (std::size_t n = 1; n <= completed_; ++n) out.push_back(estimate(g, n));
  return out;
}

std::vector<TvEstimate> left_walk_tv_curve(const GroupElement& g,
                                           std::size_t n_max,
                                           const Construction& cons,
                                           std::size_t k_max,
                                           const KLaw& law) {
  return LeftWalkEngine(cons, k_max, law, n_max).curve(g);
}

std::size_t TauHistogram::total() const {
  std::size_t t = none_count + unresolved;
  for (const auto& [value, count] : counts) t += count;
  return t;
}

void accumulate_tau(TauHistogram& h, const std::optional<TailValue>& tv) {
  if (!tv) {
    ++h.unresolved;
    return;
  }
  const TailEntry* e = tv->entry_at_level(u128{h.level});
  if (e == nullptr) {
    ++h.none_count;
  } else if (!e->resolved) {
    ++h.unresolved;
  } else {
    ++h.counts[e->value];
  }
}

TauHistogram tau_histogram(const std::vector<Trajectory>& trajs,
                           std::size_t level, const TailContext& ctx,
                           std::size_t horizon) {
  TauHistogram h;
  h.level = level;
  for (const Trajectory& t : trajs) accumulate_tau(h, tau(ctx, t, horizon));
  return h;
}

NondegeneracyReport nondegeneracy_test(const TauHistogram& h,
                                       double min_freq) {
  if (!(min_freq > 0.0) || min_freq > 1.0) {
    throw ConfigError("minimum frequency must lie in (0, 1]");
  }
  NondegeneracyReport rep;
  rep.min_freq = min_freq;
  const std::size_t total = h.total();
  rep.resolved_total = total - h.unresolved;
  if (rep.resolved_total < 100) {
    throw InsufficientSamplesError(
        "nondegeneracy test needs at least 100 resolved trajectories, got " +
        std::to_string(rep.resolved_total));
  }
  std::vector<NondegeneracyReport::TopValue> all;
  all.reserve(h.counts.size());
  for (const auto& [value, count] : h.counts) {
    NondegeneracyReport::TopValue tv;
    tv.value = value;
    tv.count = count;
    tv.freq =
        static_cast<double>(count) / static_cast<double>(rep.resolved_total);
    all.push_back(std::move(tv));
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });
  std::size_t heavy = 0;
  for (const auto& tv : all) {
    if (tv.freq >= min_freq) ++heavy;
  }
  rep.pass = heavy >= 2;
  for (std::size_t i = 0; i < all.size() && i < 2; ++i) {
    rep.top.push_back(all[i]);
  }
  return rep;
}

PerturbationOutcome run_perturbation_experiment(
    const Construction& cons, const KLaw& law, const TailContext& ctx,
    std::uint64_t master_seed, std::size_t n_traj, std::size_t traj_len,
    std::size_t horizon, std::size_t level, const Step& step_a,
    const Step& step_b, double min_freq) {
  if (n_traj < 1) throw ConfigError("perturbation experiment needs samples");
  if (horizon > traj_len) {
    throw ConfigError("horizon must lie within the trajectory length");
  }
  PerturbationOutcome out;
  out.hist_a.level = level;
  out.hist_b.level = level;
  out.pooled.level = level;
  out.ratios_consistent = true;

  for (std::size_t i = 0; i < n_traj; ++i) {
    const Trajectory t = sample_trajectory(master_seed, i, traj_len, cons, law);
    const PerturbResult pa = perturb_first(t, step_a, cons, law);
    const PerturbResult pb = perturb_first(t, step_b, cons, law);
    if (pa.ratio.has_value() != pb.ratio.has_value() ||
        (pa.ratio && *pa.ratio != *pb.ratio)) {
      out.ratios_consistent = false;
    }
    const std::optional<TailValue> ta = tau(ctx, pa.trajectory, horizon);
    const std::optional<TailValue> tb = tau(ctx, pb.trajectory, horizon);
    if (ta.has_value() != tb.has_value()) {
      throw VerificationError(
          "perturbed copies with identical level sequences disagree on "
          "certification");
    }
    if (ta) ++out.certified;
    accumulate_tau(out.hist_a, ta);
    accumulate_tau(out.hist_b, tb);
    accumulate_tau(out.pooled, ta);
    accumulate_tau(out.pooled, tb);
  }

  out.bins_disjoint = true;
  for (const auto& [value, count] : out.hist_a.counts) {
    if (count == 0) continue;
    const auto it = out.hist_b.counts.find(value);
    if (it != out.hist_b.counts.end() && it->second > 0) {
      out.bins_disjoint = false;
      break;
    }
  }
  out.nondegeneracy = nondegeneracy_test(out.pooled, min_freq);
  return out;
}

}  // namespace lampwalk
