#include "lampwalk/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include "lampwalk/cache.hpp"
#include "lampwalk/diagnostics.hpp"
#include "lampwalk/errors.hpp"
#include "lampwalk/klaw.hpp"
#include "lampwalk/measure.hpp"
#include "lampwalk/serialize.hpp"
#include "lampwalk/tail.hpp"
#include "lampwalk/walk.hpp"

namespace lampwalk {

namespace {

std::string out_file(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void check_levels(const Construction& cons, const RunConfig& cfg) {
  if (cons.depth() != cfg.levels) {
    throw ConfigError("cache at " + cache_path(cfg) + " holds " +
                      std::to_string(cons.depth()) + " levels but the config "
                      "asks for " + std::to_string(cfg.levels) +
                      "; delete it or rerun build");
  }
}

std::vector<Trajectory> sample_batch(const RunConfig& cfg,
                                     const Construction& cons,
                                     const KLaw& law) {
  std::vector<Trajectory> trajs;
  trajs.reserve(cfg.n_traj);
  for (std::size_t i = 0; i < cfg.n_traj; ++i) {
    trajs.push_back(sample_trajectory(cfg.seed, static_cast<std::uint64_t>(i),
                                      cfg.traj_len, cons, law));
  }
  return trajs;
}

void print_level_summary(const Construction& cons) {
  for (std::int64_t i = 1; i <= cons.depth(); ++i) {
    const ConstructionLevel& lvl = cons.level(i);
    std::cout << "level " << i << ": |A| = " << lvl.A.size()
              << ", |F| = " << lvl.F.size() << ", |D| = " << lvl.D.size()
              << ", b = " << format_element(lvl.b)
              << ", c = " << format_element(lvl.c) << "\n";
  }
}

std::string nondegeneracy_line(const std::string& label,
                               const NondegeneracyReport& nd) {
  std::ostringstream os;
  os << label << ": " << (nd.pass ? "pass" : "fail")
     << " (threshold " << format_double(nd.min_freq) << ", resolved "
     << nd.resolved_total << ")";
  for (const auto& tv : nd.top) {
    os << "; " << format_element(tv.value) << " x" << tv.count << " (freq "
       << format_double(tv.freq) << ")";
  }
  return os.str();
}

}  // namespace

std::string cache_path(const RunConfig& cfg) {
  return out_file(cfg, "cache.txt");
}

Construction load_cache(const RunConfig& cfg) {
  const std::string path = cache_path(cfg);
  if (!file_exists(path)) {
    throw ConfigError("no cache at " + path + "; run the build command first");
  }
  Construction cons =
      cache_from_text(read_text_file(path), cfg.spec, cfg.schedule);
  check_levels(cons, cfg);
  return cons;
}

Construction load_or_build(const RunConfig& cfg) {
  const std::string path = cache_path(cfg);
  if (file_exists(path)) {
    Construction cons =
        cache_from_text(read_text_file(path), cfg.spec, cfg.schedule);
    check_levels(cons, cfg);
    return cons;
  }
  Construction cons = build_levels(cfg.spec, cfg.schedule, cfg.levels);
  write_text_file(path, cache_to_text(cons, cfg.digest()));
  std::cout << "cache written to " << path << "\n";
  return cons;
}

void cmd_build(const RunConfig& cfg) {
  std::cout << "building " << cfg.levels << " levels on "
            << cfg.spec.canonical_string() << " with schedule "
            << cfg.schedule.canonical_string() << "\n";
  const Construction cons = build_levels(cfg.spec, cfg.schedule, cfg.levels);
  print_level_summary(cons);
  const std::string path = cache_path(cfg);
  write_text_file(path, cache_to_text(cons, cfg.digest()));
  std::cout << "cache written to " << path << " (config digest "
            << cfg.digest() << ")\n";
}

void cmd_sample(const RunConfig& cfg) {
  const Construction cons = load_or_build(cfg);
  const KLaw law;
  std::string all;
  for (std::size_t i = 0; i < cfg.n_traj; ++i) {
    const Trajectory t = sample_trajectory(
        cfg.seed, static_cast<std::uint64_t>(i), cfg.traj_len, cons, law);
    all += trajectory_dump(t, cfg.digest());
  }
  const std::string path = out_file(cfg, "trajectories.txt");
  write_text_file(path, all);
  std::cout << "wrote " << cfg.n_traj << " trajectories of length "
            << cfg.traj_len << " to " << path << "\n";
}

void cmd_tv(const RunConfig& cfg) {
  const Construction cons = load_or_build(cfg);
  const KLaw law;
  const LeftWalkEngine engine(cons, static_cast<std::size_t>(cfg.k_max), law,
                              cfg.tv_n_max);
  for (std::size_t i = 0; i < cfg.tv_elements.size(); ++i) {
    const GroupElement g = parse_element(cfg.tv_elements[i], cfg.spec.rank());
    const std::vector<TvEstimate> curve = engine.curve(g);
    const std::string path =
        out_file(cfg, "tv-curve-" + std::to_string(i + 1) + ".csv");
    write_text_file(path, tv_curve_csv(curve, cfg.digest()));
    const TvEstimate& last = curve.back();
    std::cout << "element " << cfg.tv_elements[i] << ": tv at n = " << last.n
              << " is " << format_double(last.value) << " (error bound "
              << format_double(last.error_bound) << ", reference bound "
              << format_double(last.paper_bound) << ") -> " << path << "\n";
  }
}

void cmd_tau(const RunConfig& cfg) {
  const Construction cons = load_or_build(cfg);
  if (cfg.tau_level < 1 ||
      cfg.tau_level > static_cast<std::size_t>(cons.depth())) {
    throw ConfigError("tau_level must lie in [1, built depth]");
  }
  const KLaw law;
  const TailContext ctx(cons);
  const std::vector<Trajectory> trajs = sample_batch(cfg, cons, law);

  const TauHistogram hist =
      tau_histogram(trajs, cfg.tau_level, ctx, cfg.horizon);
  const std::string hist_path = out_file(cfg, "tau-histogram.csv");
  write_text_file(hist_path, tau_histogram_csv(hist, cfg.digest()));
  std::cout << "tail histogram at level " << cfg.tau_level << ": "
            << hist.counts.size() << " distinct values, " << hist.none_count
            << " empty, " << hist.unresolved << " unresolved of "
            << hist.total() << " -> " << hist_path << "\n";

  std::vector<std::pair<std::string, TailValue>> rows;
  for (const Trajectory& t : trajs) {
    if (const std::optional<TailValue> tv = tau(ctx, t, cfg.horizon)) {
      rows.emplace_back(t.seed_token(), *tv);
    }
  }
  const std::string report_path = out_file(cfg, "tau-report.txt");
  write_text_file(report_path, tau_report_text(rows, cfg.digest()));
  std::cout << "tail report for " << rows.size()
            << " certified trajectories -> " << report_path << "\n";

  std::ostringstream nd_text;
  nd_text << "# lampwalk-nondegeneracy v1\n# config " << cfg.digest() << "\n";
  {
    NondegeneracyReport nd = nondegeneracy_test(hist, cfg.min_freq);
    const std::string line = nondegeneracy_line("plain", nd);
    nd_text << line << "\n";
    std::cout << line << "\n";
  }

  const ConstructionLevel& lvl =
      cons.level(static_cast<std::int64_t>(cfg.tau_level));
  if (lvl.bF_inv.size() < 2) {
    throw ConfigError("perturbation experiment needs at least two distinct "
                      "blue steps at the probed level");
  }
  Step step_a;
  step_a.k = static_cast<u128>(cfg.tau_level);
  step_a.y = Color::blue;
  step_a.resolved = true;
  step_a.x = lvl.bF_inv[0];
  Step step_b = step_a;
  step_b.x = lvl.bF_inv[1];
  const PerturbationOutcome outcome = run_perturbation_experiment(
      cons, law, ctx, cfg.seed, cfg.n_traj, cfg.traj_len, cfg.horizon,
      cfg.tau_level, step_a, step_b, cfg.min_freq);
  write_text_file(out_file(cfg, "tau-perturbed-a.csv"),
                  tau_histogram_csv(outcome.hist_a, cfg.digest()));
  write_text_file(out_file(cfg, "tau-perturbed-b.csv"),
                  tau_histogram_csv(outcome.hist_b, cfg.digest()));
  write_text_file(out_file(cfg, "tau-perturbed-pooled.csv"),
                  tau_histogram_csv(outcome.pooled, cfg.digest()));
  {
    std::ostringstream os;
    os << "perturbed pair " << format_element(step_a.x) << " vs "
       << format_element(step_b.x) << ": certified " << outcome.certified
       << "/" << cfg.n_traj << ", bins "
       << (outcome.bins_disjoint ? "disjoint" : "overlapping") << ", ratios "
       << (outcome.ratios_consistent ? "consistent" : "inconsistent");
    nd_text << os.str() << "\n";
    std::cout << os.str() << "\n";
    const std::string line =
        nondegeneracy_line("perturbed-pooled", outcome.nondegeneracy);
    nd_text << line << "\n";
    std::cout << line << "\n";
  }
  const std::string nd_path = out_file(cfg, "tau-nondegeneracy.txt");
  write_text_file(nd_path, nd_text.str());
  std::cout << "non-degeneracy report -> " << nd_path << "\n";
}

void cmd_verify(const RunConfig& cfg) {
  const Construction cons = load_cache(cfg);
  verify_construction(cons);
  const KLaw law;
  const TruncatedMeasure atoms = measure_atoms(cons, cfg.k_max, law);
  atoms.validate(1e-12);
  std::cout << "verification passed: " << cons.depth()
            << " levels, boundary ratios and lock checks exact, "
            << atoms.size() << " measure atoms, normalization within 1e-12\n";
}

void cmd_report(const RunConfig& cfg) {
  const Construction cons = load_or_build(cfg);
  const KLaw law;
  std::ostringstream rep;
  rep << "# lampwalk-report v1\n# config " << cfg.digest() << "\n\n";
  rep << "group: " << cfg.spec.canonical_string() << "\n";
  rep << "schedule: " << cfg.schedule.canonical_string() << "\n";
  rep << "levels: " << cons.depth() << "\n";
  for (std::int64_t i = 1; i <= cons.depth(); ++i) {
    const ConstructionLevel& lvl = cons.level(i);
    rep << "  level " << i << ": |A| = " << lvl.A.size() << ", |F| = "
        << lvl.F.size() << ", |D| = " << lvl.D.size() << ", b = "
        << format_element(lvl.b) << ", c = " << format_element(lvl.c) << "\n";
  }
  const TruncatedMeasure atoms = measure_atoms(cons, cfg.k_max, law);
  rep << "step measure: " << atoms.size() << " atoms, deficit "
      << format_double(atoms.deficit) << " (levels above " << cfg.k_max
      << " folded into the deficit)\n\n";

  // Decay curve section plus one SVG with a series per probed element.
  const LeftWalkEngine engine(cons, static_cast<std::size_t>(cfg.k_max), law,
                              cfg.tv_n_max);
  rep << "decay curve (" << kTvConventionNote << "):\n";
  std::vector<double> xs;
  for (std::size_t n = 1; n <= engine.powers(); ++n) {
    xs.push_back(static_cast<double>(n));
  }
  std::vector<ChartSeries> series;
  for (const std::string& text : cfg.tv_elements) {
    const GroupElement g = parse_element(text, cfg.spec.rank());
    const std::vector<TvEstimate> curve = engine.curve(g);
    ChartSeries s;
    s.label = text;
    for (const TvEstimate& e : curve) {
      rep << "  g = " << text << ", n = " << e.n << ": tv = "
          << format_double(e.value) << ", error bound = "
          << format_double(e.error_bound) << ", reference bound = "
          << format_double(e.paper_bound) << "\n";
      s.ys.push_back(e.value);
    }
    series.push_back(std::move(s));
  }
  const std::string tv_svg_path = out_file(cfg, "tv-curve.svg");
  write_text_file(tv_svg_path,
                  svg_line_chart("left-walk decay", xs, series));

  // Tail histogram section plus an SVG of the heaviest bins.
  const TailContext ctx(cons);
  const std::vector<Trajectory> trajs = sample_batch(cfg, cons, law);
  const TauHistogram hist =
      tau_histogram(trajs, cfg.tau_level, ctx, cfg.horizon);
  rep << "\ntail histogram at level " << cfg.tau_level << " (horizon "
      << cfg.horizon << "): " << hist.counts.size() << " distinct values, "
      << hist.none_count << " empty, " << hist.unresolved
      << " unresolved of " << hist.total() << "\n";
  std::vector<std::pair<std::size_t, GroupElement>> bins;
  for (const auto& [g, n] : hist.counts) bins.emplace_back(n, g);
  std::stable_sort(bins.begin(), bins.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const std::size_t shown = std::min<std::size_t>(bins.size(), 20);
  std::vector<double> hxs;
  ChartSeries hseries;
  hseries.label = "count per value (heaviest first)";
  for (std::size_t i = 0; i < shown; ++i) {
    rep << "  " << format_element(bins[i].second) << ": " << bins[i].first
        << "\n";
    hxs.push_back(static_cast<double>(i + 1));
    hseries.ys.push_back(static_cast<double>(bins[i].first));
  }
  if (!hxs.empty()) {
    write_text_file(out_file(cfg, "tau-histogram.svg"),
                    svg_line_chart("tail-value histogram", hxs, {hseries}));
  }
  rep << "\n"
      << nondegeneracy_line("non-degeneracy",
                            nondegeneracy_test(hist, cfg.min_freq))
      << "\n";

  const std::string path = out_file(cfg, "report.txt");
  write_text_file(path, rep.str());
  std::cout << "report -> " << path << "\n";
  std::cout << "charts -> " << tv_svg_path << "\n";
}

int dispatch(const std::string& command, const RunConfig& cfg) {
  try {
    cfg.validate();
    if (command == "build") {
      cmd_build(cfg);
    } else if (command == "sample") {
      cmd_sample(cfg);
    } else if (command == "tv") {
      cmd_tv(cfg);
    } else if (command == "tau") {
      cmd_tau(cfg);
    } else if (command == "verify") {
      cmd_verify(cfg);
    } else if (command == "report") {
      cmd_report(cfg);
    } else {
      throw ConfigError("unknown command '" + command +
                        "' (available: build, sample, tv, tau, verify, "
                        "report)");
    }
    return kExitOk;
  } catch (const SearchHorizonError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (cfg.spec.family == GroupFamily::free_abelian) {
      std::cerr << "the marker search is structurally inapplicable without a "
                   "lamp component\n";
      return kExitInapplicable;
    }
    return e.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace lampwalk
