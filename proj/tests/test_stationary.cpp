#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "ctm/error.hpp"
#include "ctm/model_io.hpp"
#include "ctm/stationary.hpp"

namespace ctm {
namespace {

double h2(double p) { return -(p * std::log2(p) + (1 - p) * std::log2(1 - p)); }

// Renewal oracles. model3 emits 2 and then two symbols from (.25, .75), so it
// cycles with period 3. model4 restarts at every 2; between restarts it emits
// one, two or three symbols from a (.25, .75) coin with probabilities .25,
// .75*.25 and .75*.75.
struct Renewal {
  double length, entropy, max_hits, match_hits;
};

Renewal model3_cycle() {
  const double m = 0.25 * 0.25 + 0.75 * 0.75;
  return {3.0, 2 * h2(0.25), 1 + 2 * 0.75, 1 + 2 * m};
}

Renewal model4_cycle() {
  const double coins = 1 + 0.75 + 0.75 * 0.75;  // expected coin flips per cycle
  const double length = 0.25 * 2 + 0.75 * (0.25 * 3 + 0.75 * 4);
  const double m = 0.25 * 0.25 + 0.75 * 0.75;
  return {length, coins * h2(0.25), 1 + 0.75 * coins, 1 + m * coins};
}

TEST(Stationary, Model3MatchesRenewalOracle) {
  const auto s = stationary_summary(preset_model("model3"));
  const auto r = model3_cycle();
  EXPECT_NEAR(s.entropy_rate, r.entropy / r.length, 1e-10);
  EXPECT_NEAR(s.maximizing_score, 5.0 / 6.0, 1e-10);
  EXPECT_NEAR(s.matching_score, 0.75, 1e-10);
  EXPECT_NEAR(s.maximizing_score, r.max_hits / r.length, 1e-10);
}

TEST(Stationary, Model4MatchesRenewalOracle) {
  const auto s = stationary_summary(preset_model("model4"));
  const auto r = model4_cycle();
  EXPECT_NEAR(s.entropy_rate, r.entropy / r.length, 1e-10);
  EXPECT_NEAR(s.maximizing_score, r.max_hits / r.length, 1e-10);
  EXPECT_NEAR(s.matching_score, r.match_hits / r.length, 1e-10);
}

TEST(Stationary, ProbabilitiesSumToOne) {
  for (const char* name : {"model3", "model4"}) {
    const auto s = stationary_summary(preset_model(name));
    double total = 0.0;
    for (double p : s.context_probability) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
    total = 0.0;
    for (double p : s.state_probability) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Stationary, IidUniformSource) {
  const auto m = build_model({{Context{}, {1.0 / 3, 1.0 / 3, 1.0 / 3}}}, 3);
  const auto s = stationary_summary(m);
  EXPECT_NEAR(s.entropy_rate, std::log2(3.0), 1e-12);
  EXPECT_NEAR(s.maximizing_score, 1.0 / 3, 1e-12);
  EXPECT_NEAR(s.matching_score, 1.0 / 3, 1e-12);
}

TEST(Stationary, TwoStateChainClosedForm) {
  // P(0->1) = a, P(1->0) = b: pi = (b, a) / (a + b).
  const double a = 0.2, b = 0.6;
  const auto m = build_model({{Context::parse("0"), {1 - a, a}}, {Context::parse("1"), {b, 1 - b}}}, 2);
  const auto s = stationary_summary(m);
  EXPECT_NEAR(s.context_probability[0], b / (a + b), 1e-12);
  EXPECT_NEAR(s.entropy_rate, (b * h2(a) + a * h2(b)) / (a + b), 1e-12);
}

TEST(Stationary, ReducibleChainIsReported) {
  const auto m = build_model({{Context::parse("0"), {1, 0, 0}},
                              {Context::parse("1"), {0, 1, 0}},
                              {Context::parse("2"), {0.5, 0.5, 0}}},
                             3);
  try {
    stationary_summary(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kReducible);
  }
}

TEST(Stationary, RunsQuickly) {
  const auto start = std::chrono::steady_clock::now();
  stationary_summary(preset_model("model3"));
  stationary_summary(preset_model("model4"));
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

}  // namespace
}  // namespace ctm
