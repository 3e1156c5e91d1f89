#include "ctm/group_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ctm/error.hpp"
#include "ctm/format.hpp"
#include "ctm/special_functions.hpp"

namespace ctm {
namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

AnovaRow make_row(std::string source, double ss, double df) {
  AnovaRow r;
  r.source = std::move(source);
  r.ss = ss;
  r.df = df;
  r.ms = df > 0 ? ss / df : std::numeric_limits<double>::quiet_NaN();
  return r;
}

void set_f(AnovaRow& effect, const AnovaRow& error, bool degenerate) {
  if (degenerate || !(effect.df > 0) || !(error.df > 0) || !(error.ms > 0)) return;
  effect.f = effect.ms / error.ms;
  effect.p = f_survival(effect.f, effect.df, error.df);
}

}  // namespace

void ScorePanel::validate() const {
  if (windows < 2) throw Error(ErrorCode::kInvalidArgument, "panel needs at least 2 windows");
  if (groups.empty()) throw Error(ErrorCode::kInvalidArgument, "panel has no groups");
  for (const auto& p : participants) {
    if (p.group >= groups.size()) throw Error(ErrorCode::kInvalidArgument, "participant " + p.id + ": bad group");
    if (p.z.size() != windows) {
      throw Error(ErrorCode::kInvalidArgument, "participant " + p.id + " has " + std::to_string(p.z.size()) +
                                                   " windows, expected " + std::to_string(windows));
    }
    for (double v : p.z) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "participant " + p.id + ": non-finite score");
    }
  }
}

std::size_t ScorePanel::group_size(std::size_t group) const {
  return static_cast<std::size_t>(std::count_if(participants.begin(), participants.end(),
                                                [&](const PanelParticipant& p) { return p.group == group; }));
}

double ols_slope(std::span<const double> z) {
  if (z.size() < 2) throw Error(ErrorCode::kInvalidArgument, "slope needs at least 2 windows");
  const double n = static_cast<double>(z.size());
  const double j_mean = (n + 1.0) / 2.0;
  const double z_mean = mean_of(z);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double dj = static_cast<double>(i + 1) - j_mean;
    sxy += dj * (z[i] - z_mean);
    sxx += dj * dj;
  }
  return sxy / sxx;
}

SlopeExclusion exclude_negative_slope(const ScorePanel& panel) {
  panel.validate();
  SlopeExclusion out;
  out.retained.groups = panel.groups;
  out.retained.windows = panel.windows;
  for (const auto& p : panel.participants) {
    const double slope = ols_slope(p.z);
    out.slopes.push_back(slope);
    out.kept.push_back(slope >= 0.0);
    if (slope >= 0.0) out.retained.participants.push_back(p);
  }
  return out;
}

const AnovaRow& AnovaTable::row(std::string_view source) const {
  for (const auto& r : rows) {
    if (r.source == source) return r;
  }
  throw Error(ErrorCode::kNotFound, "no ANOVA row '" + std::string(source) + "'");
}

AnovaTable mixed_anova(const ScorePanel& panel) {
  panel.validate();
  const std::size_t I = panel.groups.size();
  const std::size_t J = panel.windows;
  const std::size_t N = panel.participants.size();

  std::vector<std::size_t> n_i(I, 0);
  for (const auto& p : panel.participants) ++n_i[p.group];
  const auto used_groups = static_cast<std::size_t>(std::count_if(n_i.begin(), n_i.end(), [](auto n) { return n > 0; }));
  if (N <= used_groups) throw Error(ErrorCode::kDegenerateData, "no degrees of freedom for subjects within groups");

  double grand = 0.0;
  std::vector<double> subject_mean(N, 0.0), window_mean(J, 0.0), group_mean(I, 0.0);
  std::vector<std::vector<double>> cell_mean(I, std::vector<double>(J, 0.0));
  for (std::size_t v = 0; v < N; ++v) {
    const auto& p = panel.participants[v];
    for (std::size_t j = 0; j < J; ++j) {
      grand += p.z[j];
      subject_mean[v] += p.z[j];
      window_mean[j] += p.z[j];
      group_mean[p.group] += p.z[j];
      cell_mean[p.group][j] += p.z[j];
    }
  }
  grand /= static_cast<double>(N * J);
  for (auto& m : subject_mean) m /= static_cast<double>(J);
  for (auto& m : window_mean) m /= static_cast<double>(N);
  for (std::size_t i = 0; i < I; ++i) {
    if (n_i[i] == 0) continue;
    group_mean[i] /= static_cast<double>(n_i[i] * J);
    for (auto& m : cell_mean[i]) m /= static_cast<double>(n_i[i]);
  }

  double ss_total = 0.0, ss_subjects = 0.0, ss_group = 0.0, ss_window = 0.0, ss_inter = 0.0, ss_resid = 0.0;
  for (std::size_t v = 0; v < N; ++v) {
    const auto& p = panel.participants[v];
    ss_subjects += J * (subject_mean[v] - grand) * (subject_mean[v] - grand);
    for (std::size_t j = 0; j < J; ++j) {
      ss_total += (p.z[j] - grand) * (p.z[j] - grand);
      const double e = p.z[j] - cell_mean[p.group][j] - subject_mean[v] + group_mean[p.group];
      ss_resid += e * e;
    }
  }
  for (std::size_t i = 0; i < I; ++i) {
    if (n_i[i] == 0) continue;
    ss_group += static_cast<double>(n_i[i] * J) * (group_mean[i] - grand) * (group_mean[i] - grand);
    for (std::size_t j = 0; j < J; ++j) {
      const double e = cell_mean[i][j] - group_mean[i] - window_mean[j] + grand;
      ss_inter += static_cast<double>(n_i[i]) * e * e;
    }
  }
  for (std::size_t j = 0; j < J; ++j) ss_window += static_cast<double>(N) * (window_mean[j] - grand) * (window_mean[j] - grand);

  const double df_group = static_cast<double>(used_groups) - 1.0;
  const double df_subjects = static_cast<double>(N - used_groups);
  const double df_window = static_cast<double>(J) - 1.0;
  const double df_inter = df_group * df_window;
  const double df_resid = df_subjects * df_window;

  AnovaTable t;
  t.total_ss = ss_total;
  t.total_df = static_cast<double>(N * J) - 1.0;
  t.rows.push_back(make_row("model", ss_group, df_group));
  t.rows.push_back(make_row("subject(model)", ss_subjects - ss_group, df_subjects));
  t.rows.push_back(make_row("window", ss_window, df_window));
  t.rows.push_back(make_row("model:window", ss_inter, df_inter));
  t.rows.push_back(make_row("residual", ss_resid, df_resid));

  // Relative to the data scale so constant panels are flagged even with
  // rounding noise in the sums.
  const double scale = std::max(1.0, std::abs(grand));
  t.degenerate = ss_resid <= 1e-24 * scale * scale * static_cast<double>(N * J);
  set_f(t.rows[0], t.rows[1], t.degenerate);
  set_f(t.rows[2], t.rows[4], t.degenerate);
  set_f(t.rows[3], t.rows[4], t.degenerate);
  return t;
}

double paired_t_statistic(std::span<const double> a, std::span<const double> b, double& df, bool& degenerate) {
  if (a.size() != b.size() || a.size() < 2) throw Error(ErrorCode::kDegenerateData, "paired test needs >= 2 pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
  df = static_cast<double>(d.size()) - 1.0;
  const double m = mean_of(d);
  const double var = variance_of(d);
  degenerate = false;
  if (var <= 0.0) {
    if (m == 0.0) return 0.0;
    degenerate = true;
    return m > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return m / std::sqrt(var / static_cast<double>(d.size()));
}

double welch_t_statistic(std::span<const double> a, std::span<const double> b, double& df, bool& degenerate) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::kDegenerateData, "Welch test needs >= 2 values per group");
  const double va = variance_of(a) / static_cast<double>(a.size());
  const double vb = variance_of(b) / static_cast<double>(b.size());
  const double diff = mean_of(a) - mean_of(b);
  degenerate = false;
  if (va + vb <= 0.0) {
    df = static_cast<double>(a.size() + b.size()) - 2.0;
    if (diff == 0.0) return 0.0;
    degenerate = true;
    return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  df = (va + vb) * (va + vb) /
       (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  return diff / std::sqrt(va + vb);
}

std::vector<PairwiseTest> pairwise_tests(const ScorePanel& panel) {
  panel.validate();
  const std::size_t I = panel.groups.size();
  const std::size_t J = panel.windows;
  auto column = [&](std::size_t group, std::size_t window) {
    std::vector<double> out;
    for (const auto& p : panel.participants) {
      if (p.group == group) out.push_back(p.z[window]);
    }
    return out;
  };
  auto finish = [](PairwiseTest& t) {
    if (t.degenerate) {
      t.p = std::numeric_limits<double>::quiet_NaN();
    } else {
      t.p = t.t == 0.0 ? 1.0 : t_two_sided_p(t.t, t.df);
    }
  };

  std::vector<PairwiseTest> tests;
  for (std::size_t i = 0; i < I; ++i) {
    if (panel.group_size(i) < 2) continue;
    for (std::size_t j = 0; j + 1 < J; ++j) {
      PairwiseTest t;
      t.kind = "paired";
      t.group_a = t.group_b = i;
      t.window_a = j + 1;
      t.window_b = j + 2;
      t.label = panel.groups[i] + ": w" + std::to_string(j + 1) + " vs w" + std::to_string(j + 2);
      t.t = paired_t_statistic(column(i, j), column(i, j + 1), t.df, t.degenerate);
      finish(t);
      tests.push_back(std::move(t));
    }
  }
  for (std::size_t i = 0; i + 1 < I; ++i) {
    if (panel.group_size(i) < 2 || panel.group_size(i + 1) < 2) continue;
    for (std::size_t j = 0; j < J; ++j) {
      PairwiseTest t;
      t.kind = "welch";
      t.group_a = i;
      t.group_b = i + 1;
      t.window_a = t.window_b = j + 1;
      t.label = "w" + std::to_string(j + 1) + ": " + panel.groups[i] + " vs " + panel.groups[i + 1];
      t.t = welch_t_statistic(column(i, j), column(i + 1, j), t.df, t.degenerate);
      finish(t);
      tests.push_back(std::move(t));
    }
  }

  std::vector<double> raw;
  std::vector<std::size_t> where;
  for (std::size_t k = 0; k < tests.size(); ++k) {
    tests[k].p_adjusted = std::numeric_limits<double>::quiet_NaN();
    if (!tests[k].degenerate) {
      raw.push_back(tests[k].p);
      where.push_back(k);
    }
  }
  const auto adjusted = bh_adjust(raw);
  for (std::size_t k = 0; k < where.size(); ++k) tests[where[k]].p_adjusted = adjusted[k];
  return tests;
}

std::vector<double> bh_adjust(std::span<const double> p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p-values must be in [0,1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
  std::vector<double> out(m);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const double candidate = p_values[order[r]] * static_cast<double>(m) / static_cast<double>(r + 1);
    running = std::min(running, candidate);
    out[order[r]] = std::min(1.0, running);
  }
  return out;
}

std::string significance_stars(double p) {
  if (std::isnan(p)) return "";
  if (p < 1e-4) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < 0.1) return "o";
  return "";
}

nlohmann::json to_json(const AnovaTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  for (const auto& r : table.rows) {
    rows.push_back({{"source", r.source}, {"ss", r.ss}, {"df", r.df}, {"ms", num(r.ms)},
                    {"F", num(r.f)}, {"p", num(r.p)}, {"stars", significance_stars(r.p)}});
  }
  return {{"rows", rows}, {"total_ss", table.total_ss}, {"total_df", table.total_df},
          {"degenerate", table.degenerate}};
}

std::string to_csv(const AnovaTable& table) {
  std::ostringstream os;
  os << "source,ss,df,ms,F,p,stars\n";
  for (const auto& r : table.rows) {
    os << csv_field(r.source) << ',' << format_number(r.ss) << ',' << format_number(r.df) << ','
       << format_number(r.ms) << ',' << format_number(r.f) << ',' << format_number(r.p) << ','
       << significance_stars(r.p) << '\n';
  }
  os << "total," << format_number(table.total_ss) << ',' << format_number(table.total_df) << ",,,,\n";
  return os.str();
}

std::string to_csv(const std::vector<PairwiseTest>& tests) {
  std::ostringstream os;
  os << "kind,label,t,df,p,p_adjusted,stars,degenerate\n";
  for (const auto& t : tests) {
    os << t.kind << ',' << csv_field(t.label) << ',' << format_number(t.t) << ',' << format_number(t.df) << ','
       << format_number(t.p) << ',' << format_number(t.p_adjusted) << ',' << significance_stars(t.p_adjusted)
       << ',' << (t.degenerate ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace ctm
