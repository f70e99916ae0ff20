#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lampwalk/diagnostics.hpp"
#include "lampwalk/tail.hpp"
#include "lampwalk/walk.hpp"

namespace lampwalk {

// Fixed 12-significant-digit formatting: deterministic across runs.
std::string format_double(double v);

// One trajectory, one step per line: `i, k, y, x` with x the element text or
// the word "unresolved". Headers carry the configuration digest and the
// seed token.
std::string trajectory_dump(const Trajectory& t,
                            const std::string& config_digest);

// Decay-curve CSV for one element: columns n, tv_value, error_bound,
// paper_bound. Headers carry the configuration digest, the element, and the
// total-variation convention.
std::string tv_curve_csv(const std::vector<TvEstimate>& curve,
                         const std::string& config_digest);

// Histogram CSV: columns level, element, count, with sentinel rows "(none)"
// and "(unresolved)".
std::string tau_histogram_csv(const TauHistogram& h,
                              const std::string& config_digest);

// Tail report: one row per entry, `trajectory-seed, level, element,
// confidence` with confidence in {cross-checked, bookkeeping-only}.
std::string tau_report_text(
    const std::vector<std::pair<std::string, TailValue>>& rows,
    const std::string& config_digest);

struct ChartSeries {
  std::string label;
  std::vector<double> ys;
};

// Minimal self-contained SVG line chart (one x vector, multiple series).
std::string svg_line_chart(const std::string& title,
                           const std::vector<double>& xs,
                           const std::vector<ChartSeries>& series);

// Whole-file text IO; write creates parent directories, read throws a
// config error when the file is missing.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace lampwalk
