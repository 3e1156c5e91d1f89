#pragma once

#include <vector>

#include "ctm/context_tree.hpp"

namespace ctm {

// Exact long-run quantities of a context tree model, computed on the induced
// Markov chain over length-L pasts (L = tree height). States are indexed in
// base |A| with the oldest symbol most significant.
struct StationarySummary {
  std::vector<double> state_probability;
  std::vector<double> context_probability;  // aligned with model.tree().contexts()
  double entropy_rate = 0.0;                 // bits per symbol
  double maximizing_score = 0.0;             // sum_w pi(w) max_a p(a|w)
  double matching_score = 0.0;               // sum_w pi(w) sum_a p(a|w)^2
  int iterations = 0;
  bool used_direct_solve = false;
};

// Throws Reducible when the chain has more than one recurrent class and
// NotConverged when neither power iteration nor the small-state direct solve
// succeeds.
StationarySummary stationary_summary(const ContextTreeModel& model);

}  // namespace ctm
