#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ctm/analysis.hpp"

namespace ctm {

struct ReportOptions {
  std::uint64_t seed = 0;
  std::vector<std::string> models{"model3", "model4"};
  std::filesystem::path model_dir;  // empty: default_model_dir()
  std::size_t participants_per_model = 8;
  std::size_t trials = 1000;
  std::size_t density_replicates = 10000;
  // Agent specs assigned to participants in rotation.
  std::vector<std::string> agents{"matching", "maximizing", "undermatch:eps=0.3", "self:rho=0.3"};
  AnalysisOptions analysis;
  int threads = 0;
};

// Synthetic cohort run end to end: simulate every participant, analyze the
// windows, exclude negative slopes, run the mixed ANOVA and pairwise tests,
// compute per-model mode trees and draw the CPCP and windowed-PCP plots.
// Returns file name -> contents; the map is a pure function of the options
// (thread count included only as a speed knob).
std::map<std::string, std::string> build_report(const ReportOptions& options);

void write_report(const std::map<std::string, std::string>& files, const std::filesystem::path& out_dir);

// SVG helpers, exposed for tests.
struct Series {
  std::string label;
  std::vector<double> y;  // x = 1..y.size()
};
std::string line_plot_svg(const std::string& title, const std::vector<Series>& series,
                          const std::vector<std::pair<std::string, double>>& reference_lines = {});
// One box per (window, group); values[group][window] holds the samples.
std::string box_plot_svg(const std::string& title, const std::vector<std::string>& groups,
                         const std::vector<std::vector<std::vector<double>>>& values);

}  // namespace ctm
