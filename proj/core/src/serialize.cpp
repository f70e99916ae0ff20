#include "lampwalk/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lampwalk/errors.hpp"

namespace lampwalk {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trajectory_dump(const Trajectory& t,
                            const std::string& config_digest) {
  std::ostringstream os;
  os << "# lampwalk-trajectory v1\n";
  os << "# config " << config_digest << "\n";
  os << "# seed " << t.seed_token() << "\n";
  os << "# columns: i, k, y, x\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    os << (i + 1) << ", " << u128_to_string(s.k) << ", " << color_name(s.y)
       << ", " << (s.resolved ? format_element(s.x) : std::string("unresolved"))
       << "\n";
  }
  return os.str();
}

std::string tv_curve_csv(const std::vector<TvEstimate>& curve,
                         const std::string& config_digest) {
  std::ostringstream os;
  os << "# lampwalk-tv-curve v1\n";
  os << "# config " << config_digest << "\n";
  if (!curve.empty()) os << "# g " << format_element(curve.front().g) << "\n";
  os << "# note: " << kTvConventionNote << "\n";
  os << "n, tv_value, error_bound, paper_bound\n";
  for (const TvEstimate& e : curve) {
    os << e.n << ", " << format_double(e.value) << ", "
       << format_double(e.error_bound) << ", " << format_double(e.paper_bound)
       << "\n";
  }
  return os.str();
}

std::string tau_histogram_csv(const TauHistogram& h,
                              const std::string& config_digest) {
  std::ostringstream os;
  os << "# lampwalk-tau-histogram v1\n";
  os << "# config " << config_digest << "\n";
  os << "level, element, count\n";
  for (const auto& [value, count] : h.counts) {
    os << h.level << ", " << format_element(value) << ", " << count << "\n";
  }
  os << h.level << ", (none), " << h.none_count << "\n";
  os << h.level << ", (unresolved), " << h.unresolved << "\n";
  return os.str();
}

std::string tau_report_text(
    const std::vector<std::pair<std::string, TailValue>>& rows,
    const std::string& config_digest) {
  std::ostringstream os;
  os << "# lampwalk-tau-report v1\n";
  os << "# config " << config_digest << "\n";
  os << "# columns: trajectory-seed, level, element, confidence\n";
  for (const auto& [seed, tv] : rows) {
    for (const TailEntry& e : tv.entries) {
      os << seed << ", " << u128_to_string(e.level) << ", "
         << (e.resolved ? format_element(e.value) : std::string("(unresolved)"))
         << ", " << confidence_name(e.confidence) << "\n";
    }
  }
  return os.str();
}

namespace {

constexpr const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                         "#9467bd", "#8c564b"};

}  // namespace

std::string svg_line_chart(const std::string& title,
                           const std::vector<double>& xs,
                           const std::vector<ChartSeries>& series) {
  const double width = 640.0;
  const double height = 400.0;
  const double ml = 60.0, mr = 20.0, mt = 40.0, mb = 40.0;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (!xs.empty()) {
    xmin = *std::min_element(xs.begin(), xs.end());
    xmax = *std::max_element(xs.begin(), xs.end());
  }
  bool first = true;
  for (const ChartSeries& s : series) {
    for (double y : s.ys) {
      if (first) {
        ymin = ymax = y;
        first = false;
      } else {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const auto sx = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  const auto sy = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
     << width - mr << "\" y2=\"" << height - mb
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << height - mb
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << ml - 8 << "\" y=\"" << sy(ymin) + 4
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << format_double(ymin) << "</text>\n";
  os << "<text x=\"" << ml - 8 << "\" y=\"" << sy(ymax) + 4
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << format_double(ymax) << "</text>\n";
  os << "<text x=\"" << sx(xmin) << "\" y=\"" << height - mb + 16
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"11\">"
     << format_double(xmin) << "</text>\n";
  os << "<text x=\"" << sx(xmax) << "\" y=\"" << height - mb + 16
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"11\">"
     << format_double(xmax) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const ChartSeries& s = series[si];
    const char* color = kSeriesColors[si % 5];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.ys.size() && i < xs.size(); ++i) {
      os << sx(xs[i]) << "," << sy(s.ys[i]) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 16.0 * (si + 1)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
          "fill=\""
       << color << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) {
      throw ConfigError("cannot create directory " + p.parent_path().string() +
                        ": " + ec.message());
    }
  }
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os << content;
  os.flush();
  if (!os) throw ConfigError("write to " + path + " failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path + " for reading");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

}  // namespace lampwalk
