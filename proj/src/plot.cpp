#include "explorego/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fnmatch.h>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

#include "explorego/metrics/metrics.hpp"

namespace explorego::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<fs::path> expand_glob(const std::string& pattern) {
  const fs::path pat(pattern);
  std::vector<fs::path> frontier;
  frontier.emplace_back(pat.is_absolute() ? pat.root_path() : fs::path("."));

  std::vector<std::string> parts;
  for (const auto& component : pat.relative_path()) parts.push_back(component.string());

  for (const auto& part : parts) {
    std::vector<fs::path> next;
    const bool has_wildcard = part.find_first_of("*?[") != std::string::npos;
    for (const auto& base : frontier) {
      if (!has_wildcard) {
        if (fs::exists(base / part)) next.push_back(base / part);
        continue;
      }
      if (!fs::is_directory(base)) continue;
      for (const auto& entry : fs::directory_iterator(base)) {
        const std::string name = entry.path().filename().string();
        if (fnmatch(part.c_str(), name.c_str(), 0) == 0) next.push_back(entry.path());
      }
    }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

namespace {

std::string group_label(const fs::path& csv_file, const std::string& group_by) {
  if (group_by.empty()) return "all";
  const fs::path config_path = csv_file.parent_path() / "config.json";
  std::ifstream in(config_path);
  if (!in.good())
    throw ConfigError("plot: no config.json next to " + csv_file.string() +
                      " for --group-by");
  json cfg;
  in >> cfg;
  const json* node = &cfg;
  size_t pos = 0;
  while (pos != std::string::npos) {
    const size_t dot = group_by.find('.', pos);
    const std::string key = group_by.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (!node->contains(key))
      throw ConfigError("plot: config key '" + group_by + "' not found in " +
                        config_path.string());
    node = &(*node)[key];
    pos = dot == std::string::npos ? dot : dot + 1;
  }
  return group_by + "=" + node->dump();
}

int split_rank(const std::string& split) {
  if (split == "train") return 0;
  if (split == "test_reachable") return 1;
  if (split == "test_unreachable") return 2;
  return 3;
}

}  // namespace

std::vector<PlotSeries> aggregate_metric(const std::vector<fs::path>& files,
                                         const std::string& metric,
                                         const std::string& group_by) {
  // (group, split, step) -> per-seed values
  std::map<std::tuple<std::string, std::string, uint64_t>, std::vector<double>> cells;
  for (const auto& file : files) {
    const std::string group = group_label(file, group_by);
    std::ifstream in(file);
    std::string line;
    metrics::MetricRecord rec;
    while (std::getline(in, line)) {
      if (!metrics::parse_csv_row(line, rec)) continue;
      if (rec.metric != metric) continue;
      cells[{group, rec.split, rec.step}].push_back(rec.value);
    }
  }

  std::map<std::pair<std::string, std::string>, PlotSeries> by_series;
  for (const auto& [key, values] : cells) {
    const auto& [group, split, step] = key;
    auto& series = by_series[{group, split}];
    series.group = group;
    series.split = split;
    SeriesPoint p;
    p.step = step;
    p.n = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    p.mean = mean;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double sample_std = std::sqrt(ss / static_cast<double>(values.size() - 1));
      p.ci = 1.96 * sample_std / std::sqrt(static_cast<double>(values.size()));
    }
    series.points.push_back(p);  // map iteration is step-ordered per series
  }

  std::vector<PlotSeries> out;
  for (auto& [key, series] : by_series) out.push_back(std::move(series));
  std::sort(out.begin(), out.end(), [](const PlotSeries& a, const PlotSeries& b) {
    if (a.group != b.group) return a.group < b.group;
    return split_rank(a.split) < split_rank(b.split);
  });
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& metric) {
  const double width = 960, height = 540;
  const double ml = 72, mr = 24, mt = 40, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;

  uint64_t max_step = 1;
  double lo = 0.0, hi = 1e-30;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      max_step = std::max(max_step, p.step);
      lo = std::min(lo, p.mean - p.ci);
      hi = std::max(hi, p.mean + p.ci);
    }
  }
  if (hi <= lo) hi = lo + 1.0;
  hi += (hi - lo) * 0.05;

  auto sx = [&](uint64_t step) {
    return ml + pw * (static_cast<double>(step) / static_cast<double>(max_step));
  };
  auto sy = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
         fmt(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and ticks.
  svg += "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<path d=\"M" + fmt(ml) + " " + fmt(mt) + " V" + fmt(mt + ph) + " H" +
         fmt(ml + pw) + "\"/>\n";
  svg += "</g>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = static_cast<double>(i) / ticks;
    const double x = ml + pw * fx;
    const uint64_t step_val =
        static_cast<uint64_t>(fx * static_cast<double>(max_step) + 0.5);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(mt + ph + 5) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(mt + ph + 20) +
           "\" text-anchor=\"middle\">" + fmt(static_cast<double>(step_val)) +
           "</text>\n";
    const double vy = lo + (hi - lo) * fx;
    const double y = sy(vy);
    svg += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(ml) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\">" + fmt(vy) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 12) +
         "\" text-anchor=\"middle\">env steps</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(mt + ph / 2) + "\" text-anchor=\"middle\" " +
         "transform=\"rotate(-90 18 " + fmt(mt + ph / 2) + ")\">" + metric +
         "</text>\n";
  svg += "</g>\n";

  // Colour per group, line style per split.
  std::vector<std::string> groups;
  for (const auto& s : series)
    if (std::find(groups.begin(), groups.end(), s.group) == groups.end())
      groups.push_back(s.group);

  for (const auto& s : series) {
    if (s.points.empty()) continue;
    const size_t gi =
        std::find(groups.begin(), groups.end(), s.group) - groups.begin();
    const std::string colour = kPalette[gi % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const bool dashed = s.split.rfind("test", 0) == 0;

    std::string band = "M";
    for (const auto& p : s.points)
      band += fmt(sx(p.step)) + " " + fmt(sy(p.mean + p.ci)) + " L";
    band.erase(band.size() - 2);
    for (auto it = s.points.rbegin(); it != s.points.rend(); ++it)
      band += " L" + fmt(sx(it->step)) + " " + fmt(sy(it->mean - it->ci));
    band += " Z";
    svg += "<path d=\"" + band + "\" fill=\"" + colour +
           "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";

    std::string line = "M";
    for (const auto& p : s.points) line += fmt(sx(p.step)) + " " + fmt(sy(p.mean)) + " L";
    line.erase(line.size() - 2);
    svg += "<path d=\"" + line + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"1.8\"" +
           (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
  }

  // Legend.
  svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = mt + 10;
  for (const auto& s : series) {
    const size_t gi =
        std::find(groups.begin(), groups.end(), s.group) - groups.begin();
    const std::string colour = kPalette[gi % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const bool dashed = s.split.rfind("test", 0) == 0;
    svg += "<line x1=\"" + fmt(ml + pw - 190) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(ml + pw - 160) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + colour +
           "\" stroke-width=\"1.8\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") +
           "/>\n";
    svg += "<text x=\"" + fmt(ml + pw - 152) + "\" y=\"" + fmt(ly + 4) + "\">" +
           s.group + " / " + s.split + "</text>\n";
    ly += 18;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

int plot_command(const std::string& csv_glob, const std::string& metric,
                 const std::string& group_by, const fs::path& out_svg) {
  const auto files = expand_glob(csv_glob);
  if (files.empty()) {
    std::fprintf(stderr, "plot: no files match '%s'\n", csv_glob.c_str());
    return 1;
  }
  const auto series = aggregate_metric(files, metric, group_by);
  size_t total_points = 0;
  for (const auto& s : series) total_points += s.points.size();
  if (total_points == 0) {
    std::fprintf(stderr, "plot: metric '%s' not found in any matching file\n",
                 metric.c_str());
    return 1;
  }
  std::ofstream out(out_svg, std::ios::binary);
  if (!out.good()) {
    std::fprintf(stderr, "plot: cannot write %s\n", out_svg.string().c_str());
    return 1;
  }
  out << render_svg(series, metric);
  return 0;
}

}  // namespace explorego::cli
