#include "ctm/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "ctm/error.hpp"
#include "ctm/montecarlo.hpp"
#include "ctm/parallel.hpp"

namespace ctm {

double silverman_bandwidth(std::span<const double> samples) {
  const auto n = static_cast<double>(samples.size());
  if (samples.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return 1.06 * sd * std::pow(n, -0.2);
}

double sample_quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double h = (static_cast<double>(samples.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

Kde Kde::fit(std::span<const double> samples, double min_bandwidth, int threads) {
  double h = silverman_bandwidth(samples);
  if (!(h > 0.0)) h = min_bandwidth;
  return fit_with_bandwidth(samples, h, threads);
}

Kde Kde::fit_with_bandwidth(std::span<const double> samples, double bandwidth, int threads) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "KDE of an empty sample");
  if (!(bandwidth > 0.0)) throw Error(ErrorCode::kInvalidArgument, "KDE bandwidth must be > 0");
  // PCP samples live on a lattice k/m, so collapsing duplicates first makes
  // the tabulation cost independent of the replicate count.
  std::map<double, std::size_t> distinct;
  for (double v : samples) ++distinct[v];
  std::vector<std::pair<double, double>> atoms(distinct.begin(), distinct.end());

  Kde kde;
  kde.bandwidth_ = bandwidth;
  kde.values_.assign(kKdeGridPoints, 0.0);
  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  parallel_for(kKdeGridPoints, threads, [&](std::size_t g) {
    const double x = static_cast<double>(g) / static_cast<double>(kKdeGridPoints - 1);
    double acc = 0.0;
    for (const auto& [value, count] : atoms) {
      const double z = (x - value) / bandwidth;
      acc += count * std::exp(-0.5 * z * z);
    }
    kde.values_[g] = acc * norm;
  });
  return kde;
}

double Kde::operator()(double x) const noexcept {
  if (values_.empty() || x < 0.0 || x > 1.0) return 0.0;
  const double pos = x * static_cast<double>(kKdeGridPoints - 1);
  const auto lo = std::min(static_cast<std::size_t>(pos), kKdeGridPoints - 2);
  const double frac = pos - static_cast<double>(lo);
  return values_[lo] + frac * (values_[lo + 1] - values_[lo]);
}

StrategyDensities build_strategy_densities(const ContextTreeModel& model, std::size_t window_length,
                                           std::size_t replicates, std::uint64_t seed, int threads,
                                           double undermatching_quantile) {
  if (!(undermatching_quantile >= 0.0 && undermatching_quantile <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "undermatching quantile must be in [0,1]");
  }
  StrategyScoreSamples samples = strategy_score_samples(model, window_length, replicates, seed, threads);
  StrategyDensities out;
  out.model = model.name();
  out.window_length = window_length;
  out.replicates = replicates;
  out.seed = seed;
  out.undermatching_quantile = undermatching_quantile;
  // One lattice step of PCP when a strategy never varies (deterministic models).
  const double min_bandwidth = 1.0 / static_cast<double>(window_length);
  out.matching = Kde::fit(samples.matching, min_bandwidth, threads);
  out.maximizing = Kde::fit(samples.maximizing, min_bandwidth, threads);
  out.undermatching_threshold = sample_quantile(samples.matching, undermatching_quantile);
  out.matching_samples = std::move(samples.matching);
  out.maximizing_samples = std::move(samples.maximizing);
  return out;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kUndermatching: return "undermatching";
    case Strategy::kMatching: return "matching";
    case Strategy::kMaximizing: return "maximizing";
  }
  return "?";
}

StrategyClass classify_strategy(double pcp_value, const StrategyDensities& densities) {
  StrategyClass out;
  out.matching_density = densities.matching(pcp_value);
  out.maximizing_density = densities.maximizing(pcp_value);
  out.undermatching_threshold = densities.undermatching_threshold;
  if (pcp_value < densities.undermatching_threshold) {
    out.strategy = Strategy::kUndermatching;
  } else if (out.maximizing_density > out.matching_density) {
    out.strategy = Strategy::kMaximizing;
  } else {
    out.strategy = Strategy::kMatching;
  }
  return out;
}

nlohmann::json to_json(const StrategyDensities& d) {
  return {{"model", d.model},
          {"window_length", d.window_length},
          {"replicates", d.replicates},
          {"seed", d.seed},
          {"undermatching_quantile", d.undermatching_quantile},
          {"undermatching_threshold", d.undermatching_threshold},
          {"bandwidth", {{"matching", d.matching.bandwidth()}, {"maximizing", d.maximizing.bandwidth()}}},
          {"samples", {{"matching", d.matching_samples}, {"maximizing", d.maximizing_samples}}}};
}

StrategyDensities densities_from_json(const nlohmann::json& j, int threads) {
  StrategyDensities d;
  try {
    d.model = j.at("model").get<std::string>();
    d.window_length = j.at("window_length").get<std::size_t>();
    d.replicates = j.at("replicates").get<std::size_t>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.undermatching_quantile = j.at("undermatching_quantile").get<double>();
    d.matching_samples = j.at("samples").at("matching").get<std::vector<double>>();
    d.maximizing_samples = j.at("samples").at("maximizing").get<std::vector<double>>();
    d.matching = Kde::fit_with_bandwidth(d.matching_samples, j.at("bandwidth").at("matching").get<double>(), threads);
    d.maximizing =
        Kde::fit_with_bandwidth(d.maximizing_samples, j.at("bandwidth").at("maximizing").get<double>(), threads);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("densities file: ") + e.what());
  }
  d.undermatching_threshold = sample_quantile(d.matching_samples, d.undermatching_quantile);
  return d;
}

}  // namespace ctm
