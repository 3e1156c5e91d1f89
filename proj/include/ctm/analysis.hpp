#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctm/bic.hpp"
#include "ctm/group_stats.hpp"
#include "ctm/lr_test.hpp"
#include "ctm/strategy.hpp"
#include "ctm/windows.hpp"

namespace ctm {

struct AnalysisOptions {
  std::size_t window_length = 250;
  std::size_t window_step = 150;
  int max_height = 4;
  std::vector<double> penalty_grid = default_penalty_grid();
  double alpha = 0.05;
  int k_prime = 1;
  int k = 1;
  int threads = 1;
};

struct WindowAnalysis {
  std::size_t index = 1;  // 1-based
  TrialRange range;
  double pcp = 0.0;
  double normalized = 0.0;
  double logit = 0.0;
  std::optional<StrategyClass> strategy;  // absent without densities
  TuneResult tree;
  LRDecision lr;
};

struct SessionAnalysis {
  std::string participant;
  std::string model;
  std::size_t n = 0;
  double maximizing_score = 0.0;
  double matching_score = 0.0;
  std::vector<WindowAnalysis> windows;
  std::vector<double> cpcp;
};

// Every complete window of the recorded trials: pcp, normalized logit,
// strategy class, tuned tree and LR independence test. Throws NotEnoughTrials
// when fewer trials than one window are present.
SessionAnalysis analyze_session(const PairedSample& sample, const ContextTreeModel& model,
                                const StrategyDensities* densities, const AnalysisOptions& options = {},
                                std::string participant = "");

nlohmann::json to_json(const SessionAnalysis& analysis);

// participant,model,window,pcp,normalized,logit,strategy,lr_p_value
std::string windows_csv_header();
std::string windows_csv_rows(const SessionAnalysis& analysis);

// Rebuilds a logit panel from window CSV rows (the header is required).
// Groups keep their first-seen order unless `group_order` is given.
ScorePanel panel_from_windows_csv(std::string_view text, const std::vector<std::string>& group_order = {});

}  // namespace ctm
