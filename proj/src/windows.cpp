#include "ctm/windows.hpp"

#include <algorithm>
#include <cmath>

#include "ctm/error.hpp"
#include "ctm/stationary.hpp"

namespace ctm {

std::vector<TrialRange> WindowSpec::ranges() const {
  if (length == 0 || step == 0) throw Error(ErrorCode::kInvalidArgument, "window length and step must be > 0");
  std::vector<TrialRange> out;
  for (std::size_t start = 1; start + length - 1 <= n; start += step) {
    out.push_back({start, start + length - 1});
  }
  return out;
}

double pcp(const PairedSample& sample, TrialRange range) {
  if (range.start < 1 || range.end < range.start || range.end > sample.size()) {
    throw Error(ErrorCode::kEmptyRange, "range [" + std::to_string(range.start) + ", " +
                                            std::to_string(range.end) + "] of " +
                                            std::to_string(sample.size()) + " trials");
  }
  std::size_t hits = 0;
  for (std::size_t t = range.start - 1; t < range.end; ++t) hits += sample.x[t] == sample.y[t];
  return static_cast<double>(hits) / static_cast<double>(range.size());
}

std::vector<double> cpcp_curve(const PairedSample& sample) {
  std::vector<double> out(sample.size());
  std::size_t hits = 0;
  for (std::size_t t = 0; t < sample.size(); ++t) {
    hits += sample.x[t] == sample.y[t];
    out[t] = static_cast<double>(hits) / static_cast<double>(t + 1);
  }
  return out;
}

double normalized_pcp(double pcp_value, double maximizing_score) {
  if (!(maximizing_score > 0.0)) throw Error(ErrorCode::kInvalidArgument, "maximizing score must be > 0");
  return pcp_value / maximizing_score;
}

double normalized_logit(double pcp_value, double maximizing_score, std::size_t window_length) {
  if (!(pcp_value >= 0.0 && pcp_value <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "pcp outside [0,1]");
  if (window_length == 0) throw Error(ErrorCode::kInvalidArgument, "window length must be > 0");
  const double floor = 1.0 / (2.0 * static_cast<double>(window_length));
  const double p = std::clamp(normalized_pcp(pcp_value, maximizing_score), floor, 1.0 - floor);
  return std::log(p / (1.0 - p));
}

double normalized_logit(double pcp_value, const ContextTreeModel& model, std::size_t window_length) {
  return normalized_logit(pcp_value, stationary_summary(model).maximizing_score, window_length);
}

}  // namespace ctm
