// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "ctm/agents.hpp"
#include "ctm/analysis.hpp"
#include "ctm/bic.hpp"
#include "ctm/group_stats.hpp"
#include "ctm/model_io.hpp"
#include "ctm/montecarlo.hpp"
#include "ctm/report.hpp"
#include "ctm/session.hpp"
#include "ctm/simulate.hpp"
#include "ctm/special_functions.hpp"
#include "ctm/stationary.hpp"
#include "ctm/strategy.hpp"
#include "ctm/windows.hpp"

namespace {

using namespace ctm;
using Clock = std::chrono::steady_clock;

constexpr double kEntropyTol = 0.005;
constexpr double kScoreTol = 0.002;
constexpr double kFunctionTol = 1e-6;
constexpr double kSsTol = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void check(const char* name, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o = body();
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
  failures += !o.pass;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::shared_ptr<const ContextTreeModel> shared_preset(const char* name) {
  return std::make_shared<const ContextTreeModel>(preset_model(name));
}

Outcome entropy() {
  const auto t0 = Clock::now();
  const double h3 = stationary_summary(preset_model("model3")).entropy_rate;
  const double h4 = stationary_summary(preset_model("model4")).entropy_rate;
  const double secs = elapsed(t0);
  const bool ok = std::abs(h3 - 0.54) <= kEntropyTol && std::abs(h4 - 0.56) <= kEntropyTol && secs < 1.0;
  return {ok, fmt("model3 %.5f (target 0.54), model4 %.5f (target 0.56), tol %.3f", h3, h4, kEntropyTol)};
}

Outcome strategy_scores() {
  const auto m = preset_model("model3");
  const auto s = stationary_summary(m);
  const auto t0 = Clock::now();
  const auto samples = strategy_score_samples(m, 250, 10000, 20251018, 0);
  const double secs = elapsed(t0);
  const auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); };
  const double mx = mean(samples.maximizing), mt = mean(samples.matching);
  const bool ok = std::abs(s.maximizing_score - 5.0 / 6.0) < 1e-9 && std::abs(s.matching_score - 0.75) < 1e-9 &&
                  std::abs(mx - 5.0 / 6.0) <= kScoreTol && std::abs(mt - 0.75) <= kScoreTol && secs < 30.0;
  return {ok, fmt("closed form %.6f/%.6f, simulated maximizing %.5f, matching %.5f", s.maximizing_score,
                  s.matching_score, mx, mt)};
}

// Exhaustive search over the complete trees of height <= 2, scored from raw counts.
std::set<std::string> brute_force_tree(const PairedSample& s, double c) {
  const auto score = [&](const std::string& u) {
    std::vector<double> counts(3, 0.0);
    for (std::size_t i = u.size(); i < s.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < u.size(); ++k) match &= s.x[i - u.size() + k] == u[k] - '0';
      if (match) counts[s.y[i]] += 1;
    }
    const double total = counts[0] + counts[1] + counts[2];
    double ll = 0;
    int df = -1;
    for (double v : counts)
      if (v > 0) {
        ll += v * std::log(v / total);
        ++df;
      }
    return ll - c * df * std::log(double(s.size()));
  };
  std::set<std::string> best{""};
  double best_score = score("");
  for (int mask = 0; mask < 8; ++mask) {
    std::set<std::string> t;
    double total = 0;
    for (int b = 0; b < 3; ++b) {
      const std::string last(1, char('0' + b));
      if (mask & (1 << b)) {
        for (int a = 0; a < 3; ++a) {
          t.insert(char('0' + a) + last);
          total += score(char('0' + a) + last);
        }
      } else {
        t.insert(last);
        total += score(last);
      }
    }
    if (total > best_score + 1e-9 || (std::abs(total - best_score) <= 1e-9 && t.size() < best.size())) {
      best_score = total;
      best = t;
    }
  }
  return best;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> sym(0, 2);
  std::uniform_real_distribution<double> u(0, 1);
  int matches = 0;
  for (int r = 0; r < 50; ++r) {
    PairedSample s;
    s.x.resize(300);
    s.y.resize(300);
    for (auto& v : s.x) v = Symbol(sym(gen));
    const double noise = 0.2 + 0.6 * u(gen);
    for (std::size_t i = 0; i < 300; ++i) {
      int y = sym(gen);
      if (i >= 2 && u(gen) > noise) y = r % 2 ? s.x[i - 1] : (s.x[i - 1] == 2 ? s.x[i - 2] : 2 - s.x[i - 1]);
      s.y[i] = Symbol(y);
    }
    const double c = 0.25 * double(1 + r % 8);
    const auto fit = estimate_tree(s, 2, c);
    std::set<std::string> got;
    for (const auto& ctx : fit.tree.contexts()) got.insert(ctx.str());
    matches += got == brute_force_tree(s, c);
  }
  const double secs = elapsed(t0);
  return {matches == 50 && secs < 10.0, fmt("%.0f/50 samples match exhaustive search", matches)};
}

Outcome recovery() {
  const auto t0 = Clock::now();
  const auto grid = default_penalty_grid();
  const auto m3 = shared_preset("model3");
  const auto m4 = shared_preset("model4");
  const auto r3 = planted_recovery(*m3, parse_agent_spec("matching", m3), m3->tree(), 1000, 4, grid, 100, 31, 0);
  const auto r4 = planted_recovery(*m4, parse_agent_spec("matching", m4), m4->tree(), 1000, 4, grid, 100, 41, 0);
  const double secs = elapsed(t0);
  return {r3.recovered >= 90 && r4.recovered >= 85 && secs < 120.0,
          fmt("model3 %.0f/100 (need 90), model4 %.0f/100 (need 85)", double(r3.recovered), double(r4.recovered))};
}

Outcome lr_calibration() {
  const auto kicker = shared_preset("model3");
  const auto h0_model = std::make_shared<const ContextTreeModel>(parse_model_config(
                                                                      "name=h0\nalphabet=3\n"
                                                                      "context=0 p=0.6,0.3,0.1\n"
                                                                      "context=1 p=0.2,0.5,0.3\n"
                                                                      "context=2 p=0.3,0.3,0.4\n")
                                                                      .build());
  AgentSpec h0;
  h0.kind = AgentKind::kFixedTree;
  h0.belief = h0_model;
  const auto size = lr_rejection_rate(*kicker, h0, 1000, 1, 1, 0.05, 500, 51, 0);
  const auto power = lr_rejection_rate(*kicker, parse_agent_spec("self:rho=0.5", kicker), 1000, 1, 1, 0.05, 200, 52, 0);
  const bool ok = size.rate() >= 0.02 && size.rate() <= 0.09 && power.rate() >= 0.9;
  return {ok, fmt("H0 rejection %.3f (need [0.02, 0.09]), power %.3f (need 0.9)", size.rate(), power.rate())};
}

Outcome distribution_functions() {
  double worst = 0;
  for (double x : {0.1, 1.0, 2.5, 5.9915, 10.0, 20.0}) worst = std::max(worst, std::abs(chi_square_survival(x, 2) - std::exp(-x / 2)));
  for (double x : {0.5, 3.841458820694124, 9.0}) worst = std::max(worst, std::abs(chi_square_survival(x, 1) - std::erfc(std::sqrt(x / 2))));
  // Paired toy: differences 1, .5, 2, 2 give t = 11/3 on 3 df.
  const std::vector<double> a{1, 2, 4, 7}, b{2, 2.5, 6, 9};
  double df = 0;
  bool degenerate = false;
  const double t = paired_t_statistic(a, b, df, degenerate);
  const double theta = std::atan(t / std::sqrt(3.0));
  const double closed = 1 - 2 / M_PI * (theta + std::sin(theta) * std::cos(theta));
  const double p = t_two_sided_p(t, df);
  worst = std::max({worst, std::abs(t - 11.0 / 3.0), std::abs(p - closed)});
  return {worst <= kFunctionTol, fmt("max abs error %.2e (t = %.6f, p = %.6f)", worst, t, p)};
}

// Windows of full 1000-trial sessions, classified as the analysis pipeline does.
Outcome classifier() {
  const auto m = shared_preset("model3");
  const auto d = build_strategy_densities(*m, 250, 10000, 1, 0);
  const auto ranges = WindowSpec{}.ranges();
  const auto rate = [&](const char* agent, Strategy want) {
    const auto spec = parse_agent_spec(agent, m);
    std::size_t hit = 0, total = 0;
    for (std::uint64_t r = 0; r < 200; ++r) {
      PairedSample s;
      s.x = simulate(*m, 1000, 61, kicker_stream(r));
      s.y = run_agent(spec, s.x, 61, r);
      for (const auto& w : ranges) {
        hit += classify_strategy(pcp(s, w), d).strategy == want;
        ++total;
      }
    }
    return double(hit) / double(total);
  };
  const double mx = rate("maximizing", Strategy::kMaximizing);
  const double mt = rate("matching", Strategy::kMatching);
  const double un = rate("uniform", Strategy::kUndermatching);
  return {mx >= 0.95 && mt >= 0.85 && un >= 0.99,
          fmt("maximizing %.3f (need .95), matching %.3f (need .85), uniform %.3f (need .99) over 1200 windows", mx, mt, un)};
}

Outcome determinism() {
  ReportOptions o;
  o.seed = 2026;
  o.threads = 1;
  const auto a = build_report(o);
  const auto b = build_report(o);
  o.threads = 4;
  const auto c = build_report(o);
  o.threads = 0;
  const auto d = build_report(o);
  const bool ok = a == b && a == c && a == d;
  return {ok, fmt("%.0f files identical across runs and 1/4/default threads", double(a.size()))};
}

Outcome golden_pipeline() {
  const std::filesystem::path dir = CTM_SOURCE_DIR "/tests/data/golden";
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string csv = windows_csv_header();
  for (const auto& f : files) {
    const auto stem = f.stem().string();
    const auto model = stem.substr(0, stem.find('_'));
    auto a = analyze_session(import_csv(f).sample(), preset_model(model), nullptr, {}, stem);
    a.model = model;
    csv += windows_csv_rows(a);
  }
  const auto panel = exclude_negative_slope(panel_from_windows_csv(csv)).retained;
  const auto t = mixed_anova(panel);
  double sum = 0;
  for (const auto& r : t.rows) sum += r.ss;
  const double gap = std::abs(sum - t.total_ss);
  return {gap <= kSsTol && !t.rows.empty(),
          fmt("%.0f sessions, %.0f retained, SS gap %.2e", double(files.size()), double(panel.participants.size()), gap)};
}

}  // namespace

int main() {
  check("entropy reproduction", entropy);
  check("strategy scores", strategy_scores);
  check("estimator oracle equivalence", oracle_equivalence);
  check("planted-model recovery", recovery);
  check("LR test calibration", lr_calibration);
  check("distribution functions", distribution_functions);
  check("strategy classifier", classifier);
  check("pipeline determinism", determinism);
  check("imported CSV to ANOVA", golden_pipeline);
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
