#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctm/context_tree.hpp"
#include "ctm/sample.hpp"

namespace ctm {

// One node w of the admissible tree: counts of y_{t+1} = a over the times t
// at which the kicker's last |w| symbols spell w.
struct CandidateNode {
  Context context;
  std::vector<std::uint32_t> counts;  // N^{XY}(w, a)
  std::uint32_t total = 0;            // N^X(w)
  int df = -1;                        // #{a : N^{XY}(w,a) >= 1} - 1
  double log_likelihood = 0.0;        // sum_a N log(N / N^X), 0 log 0 = 0
  std::int32_t parent = -1;
  std::array<std::int32_t, kMaxAlphabet> children{};  // -1 when not admissible

  bool is_leaf() const noexcept;
};

class CandidateTree {
 public:
  const std::vector<CandidateNode>& nodes() const noexcept { return nodes_; }
  const CandidateNode& node(std::size_t i) const noexcept { return nodes_[i]; }
  std::size_t size() const noexcept { return nodes_.size(); }
  int max_height() const noexcept { return max_height_; }
  std::size_t sample_size() const noexcept { return n_; }
  int alphabet_size() const noexcept { return alphabet_; }
  std::uint32_t min_count() const noexcept { return min_count_; }

  std::int32_t find(const Context& context) const noexcept;

 private:
  friend CandidateTree count_statistics(const PairedSample&, int, std::uint32_t);
  std::vector<CandidateNode> nodes_;  // nodes_[0] is the root
  int max_height_ = 0;
  std::size_t n_ = 0;
  int alphabet_ = 0;
  std::uint32_t min_count_ = 1;
};

// Admissible tree of maximal height L. A node is admissible iff
// N^X(w) >= min_count. Throws SampleTooShort unless n > L >= 1.
CandidateTree count_statistics(const PairedSample& sample, int max_height,
                               std::uint32_t min_count = 1);

struct NodeDecision {
  double own = 0.0;       // log L_w - c df(w) log n
  double children = 0.0;  // sum over admissible children of log V_{bw}
  double value = 0.0;     // log V_{w,n}
  bool split = false;     // indicator X_{w,n}
};

struct EstimationResult {
  ContextTree tree;                                // suffix-free; complete over observed pasts
  std::vector<std::vector<double>> q;              // aligned with tree.contexts()
  std::vector<std::vector<std::uint32_t>> counts;  // aligned with tree.contexts()
  double penalty = 0.0;
  int max_height = 0;
  std::size_t n = 0;
  double penalized_log_likelihood = 0.0;  // log V at the root
  std::vector<NodeDecision> decisions;    // aligned with candidate nodes
};

// Bottom-up BIC pruning of the admissible tree, in log space.
EstimationResult bic_select(const CandidateTree& candidate, double penalty, std::size_t n);

// Convenience: count_statistics + bic_select with n = sample size.
EstimationResult estimate_tree(const PairedSample& sample, int max_height, double penalty,
                               std::uint32_t min_count = 1);

// Predicts y_{t+1} from the kicker's past through a fitted tree. Pasts that
// leave the fitted tree fall back to the deepest candidate node on their path.
class TreePredictor {
 public:
  TreePredictor(const CandidateTree& candidate, const EstimationResult& result);
  // `past` holds x_1..x_t; returns argmax q̂ (ties to the lowest symbol).
  Symbol predict(std::span<const Symbol> past) const;

 private:
  const CandidateTree* candidate_;
  const EstimationResult* result_;
};

inline constexpr double kHoldoutFraction = 0.3;

std::vector<double> default_penalty_grid();

struct TuneResult {
  double penalty = 0.0;
  std::vector<double> grid;
  std::vector<double> holdout_error;  // aligned with grid
  std::size_t fit_size = 0;
  std::size_t holdout_size = 0;
  EstimationResult result;  // refit on the full sample with the chosen penalty
};

// Chronological split: fit on the first 70%, score argmax predictions on the
// rest, choose the penalty with the smallest error (ties to the larger c),
// then refit on the whole sample. Grid points run in parallel; threads <= 0
// uses the OpenMP default.
TuneResult tune_penalty(const PairedSample& sample, int max_height, std::span<const double> grid,
                        std::uint32_t min_count = 1, int threads = 1);

nlohmann::json to_json(const EstimationResult& result);
// Refit result plus a "tuning" object with the grid and hold-out errors.
nlohmann::json to_json(const TuneResult& tune);
// Reads the "contexts" list of an estimation JSON (or a bare {"contexts": [...]}).
ContextTree tree_from_json(const nlohmann::json& j, int alphabet_size = kGoalkeeperAlphabet);

}  // namespace ctm
