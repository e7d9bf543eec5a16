#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace explorego::cli {

/// Mean and normal-approximation 95% confidence halfwidth over seeds at one
/// recorded step.
struct SeriesPoint {
  uint64_t step = 0;
  double mean = 0.0;
  double ci = 0.0;  // 1.96 * sample std / sqrt(n); 0 when n == 1
  size_t n = 0;
};

struct PlotSeries {
  std::string group;  // from the run's config echo, "<key>=<value>"
  std::string split;
  std::vector<SeriesPoint> points;  // ascending step order
};

/// Minimal path glob: '*' and '?' wildcards within path components.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

/// Collects every row of `metric` from the CSV files, labels each file by
/// the `group_by` key of the config.json next to it (or "all" when
/// group_by is empty) and aggregates across seeds per (group, split, step).
std::vector<PlotSeries> aggregate_metric(const std::vector<std::filesystem::path>& files,
                                         const std::string& metric,
                                         const std::string& group_by);

/// Deterministic SVG: one line per (group, split), solid for train/global
/// and dashed for test splits, with a shaded mean +- CI band.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& metric);

/// The `plot` subcommand. Returns a nonzero exit code when no file matches
/// or the metric is absent from every file.
int plot_command(const std::string& csv_glob, const std::string& metric,
                 const std::string& group_by, const std::filesystem::path& out_svg);

}  // namespace explorego::cli
