#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ctm {

struct PanelParticipant {
  std::string id;
  std::size_t group = 0;  // index into ScorePanel::groups
  std::vector<double> z;  // one value per window, window j at index j-1
};

// Logit-normalized scores z_{ijv}: between-subject factor = group (kicker
// model), within-subject factor = window.
struct ScorePanel {
  std::vector<std::string> groups;
  std::size_t windows = 0;
  std::vector<PanelParticipant> participants;

  // Throws InvalidArgument unless every participant has `windows` values and
  // a valid group.
  void validate() const;
  std::size_t group_size(std::size_t group) const;
};

// OLS slope of z against j = 1..J.
double ols_slope(std::span<const double> z);

struct SlopeExclusion {
  ScorePanel retained;
  std::vector<double> slopes;  // aligned with the input participants
  std::vector<bool> kept;      // slope >= 0
};

SlopeExclusion exclude_negative_slope(const ScorePanel& panel);

struct AnovaRow {
  std::string source;
  double ss = 0.0;
  double df = 0.0;
  double ms = 0.0;
  double f = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
};

// Split-plot decomposition. Rows, in order: model, subject(model), window,
// model:window, residual. total_ss is computed directly from the data.
struct AnovaTable {
  std::vector<AnovaRow> rows;
  double total_ss = 0.0;
  double total_df = 0.0;
  bool degenerate = false;  // zero residual variance; F and p are NaN

  const AnovaRow& row(std::string_view source) const;
};

// Uncorrected (no sphericity adjustment) two-way mixed ANOVA. Unequal group
// sizes are allowed. Throws DegenerateData when an error term has no degrees
// of freedom.
AnovaTable mixed_anova(const ScorePanel& panel);

struct PairwiseTest {
  std::string kind;  // "paired" (consecutive windows) or "welch" (consecutive models)
  std::string label;
  std::size_t group_a = 0, group_b = 0;
  std::size_t window_a = 0, window_b = 0;  // 1-based
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  double p_adjusted = 1.0;
  bool degenerate = false;  // zero variance with a nonzero difference; p is NaN
};

double paired_t_statistic(std::span<const double> a, std::span<const double> b, double& df, bool& degenerate);
double welch_t_statistic(std::span<const double> a, std::span<const double> b, double& df, bool& degenerate);

// Paired t-tests across consecutive windows within each group, Welch tests
// between consecutive groups per window; Benjamini-Hochberg over the family
// of non-degenerate p-values fills p_adjusted.
std::vector<PairwiseTest> pairwise_tests(const ScorePanel& panel);

// Step-up adjustment: adjusted_(i) = min_{j >= i} p_(j) m / j, capped at 1,
// returned in input order.
std::vector<double> bh_adjust(std::span<const double> p_values);

// "***" [0,1e-4), "**" [1e-4,0.01), "*" [0.01,0.05), "o" [0.05,0.1), "" otherwise.
std::string significance_stars(double p);

nlohmann::json to_json(const AnovaTable& table);
std::string to_csv(const AnovaTable& table);
std::string to_csv(const std::vector<PairwiseTest>& tests);

}  // namespace ctm
