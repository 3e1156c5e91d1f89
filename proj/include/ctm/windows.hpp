#pragma once

#include <cstddef>
#include <vector>

#include "ctm/context_tree.hpp"
#include "ctm/sample.hpp"

namespace ctm {

// Inclusive 1-based trial range.
struct TrialRange {
  std::size_t start = 1;
  std::size_t end = 1;
  std::size_t size() const noexcept { return end - start + 1; }
  friend bool operator==(const TrialRange&, const TrialRange&) = default;
};

struct WindowSpec {
  std::size_t length = 250;
  std::size_t step = 150;
  std::size_t n = 1000;

  // Windows [1 + k*step, k*step + length] that fit inside n.
  std::vector<TrialRange> ranges() const;
};

// Proportion of trials in `range` with y_t = x_t. Throws EmptyRange.
double pcp(const PairedSample& sample, TrialRange range);

// CPCP(t) = (1/t) sum_{m <= t} 1{y_m = x_m}, for t = 1..n.
std::vector<double> cpcp_curve(const PairedSample& sample);

// pcp / maximizing_score, clamped to [1/(2m), 1 - 1/(2m)], then logit.
double normalized_pcp(double pcp_value, double maximizing_score);
double normalized_logit(double pcp_value, double maximizing_score, std::size_t window_length);
double normalized_logit(double pcp_value, const ContextTreeModel& model, std::size_t window_length);

}  // namespace ctm
