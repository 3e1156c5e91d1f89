#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctm/context_tree.hpp"

namespace ctm {

inline constexpr std::size_t kKdeGridPoints = 512;
inline constexpr double kUndermatchingQuantile = 0.05;

// Gaussian kernel density on [0, 1], tabulated on an evenly spaced grid and
// linearly interpolated between grid points.
class Kde {
 public:
  Kde() = default;

  // Silverman bandwidth 1.06 * sd * N^{-1/5}; `min_bandwidth` applies when
  // the sample has zero spread.
  static Kde fit(std::span<const double> samples, double min_bandwidth, int threads = 1);
  static Kde fit_with_bandwidth(std::span<const double> samples, double bandwidth, int threads = 1);

  double bandwidth() const noexcept { return bandwidth_; }
  const std::vector<double>& grid_values() const noexcept { return values_; }

  // Interpolated density; 0 outside [0, 1].
  double operator()(double x) const noexcept;

 private:
  double bandwidth_ = 0.0;
  std::vector<double> values_;
};

double silverman_bandwidth(std::span<const double> samples);
// Linear-interpolation (type 7) sample quantile.
double sample_quantile(std::vector<double> samples, double q);

struct StrategyDensities {
  std::string model;
  std::size_t window_length = 250;
  std::size_t replicates = 10000;
  std::uint64_t seed = 0;
  std::vector<double> matching_samples;
  std::vector<double> maximizing_samples;
  Kde matching;
  Kde maximizing;
  double undermatching_quantile = kUndermatchingQuantile;
  double undermatching_threshold = 0.0;  // that quantile of matching_samples
};

StrategyDensities build_strategy_densities(const ContextTreeModel& model, std::size_t window_length,
                                           std::size_t replicates, std::uint64_t seed, int threads = 0,
                                           double undermatching_quantile = kUndermatchingQuantile);

enum class Strategy { kUndermatching, kMatching, kMaximizing };

std::string_view strategy_name(Strategy s);

struct StrategyClass {
  Strategy strategy = Strategy::kMatching;
  double matching_density = 0.0;
  double maximizing_density = 0.0;
  double undermatching_threshold = 0.0;
};

// pcp below the threshold -> undermatching; otherwise the strategy whose
// density is higher at pcp, ties to matching.
StrategyClass classify_strategy(double pcp_value, const StrategyDensities& densities);

nlohmann::json to_json(const StrategyDensities& densities);
// Rebuilds the KDE tables from the stored samples and bandwidths.
StrategyDensities densities_from_json(const nlohmann::json& j, int threads = 1);

}  // namespace ctm
