#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "ctm/error.hpp"
#include "ctm/group_stats.hpp"

namespace ctm {
namespace {

ScorePanel toy_panel() {
  ScorePanel p;
  p.groups = {"A", "B"};
  p.windows = 2;
  p.participants = {{"s1", 0, {1, 3}}, {"s2", 0, {2, 6}}, {"s3", 1, {4, 5}}, {"s4", 1, {7, 9}}};
  return p;
}

ScorePanel random_panel(std::uint64_t seed, std::size_t groups, std::size_t windows) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0, 1);
  ScorePanel p;
  p.windows = windows;
  for (std::size_t g = 0; g < groups; ++g) {
    p.groups.push_back("m" + std::to_string(g + 1));
    const std::size_t n = 3 + (seed + g) % 4;
    for (std::size_t v = 0; v < n; ++v) {
      PanelParticipant part{"p" + std::to_string(g) + "_" + std::to_string(v), g, {}};
      const double subject = nd(gen);
      for (std::size_t j = 0; j < windows; ++j) part.z.push_back(subject + 0.2 * double(j) * double(g) + nd(gen));
      p.participants.push_back(part);
    }
  }
  return p;
}

// Values computed by hand for the 2 x 2 x 2 toy panel (grand mean 37/8).
TEST(MixedAnova, ToyPanelHandComputation) {
  const auto t = mixed_anova(toy_panel());
  EXPECT_NEAR(t.total_ss, 49.875, 1e-12);
  EXPECT_NEAR(t.row("model").ss, 21.125, 1e-12);
  EXPECT_NEAR(t.row("subject(model)").ss, 16.25, 1e-12);
  EXPECT_NEAR(t.row("window").ss, 10.125, 1e-12);
  EXPECT_NEAR(t.row("model:window").ss, 1.125, 1e-12);
  EXPECT_NEAR(t.row("residual").ss, 1.25, 1e-12);
  EXPECT_EQ(t.row("model").df, 1);
  EXPECT_EQ(t.row("subject(model)").df, 2);
  EXPECT_EQ(t.row("residual").df, 2);
  EXPECT_NEAR(t.row("model").f, 2.6, 1e-12);
  EXPECT_NEAR(t.row("window").f, 16.2, 1e-12);
  EXPECT_NEAR(t.row("model:window").f, 1.8, 1e-12);
  EXPECT_NEAR(t.row("model").p, 0.24819058844388778, 1e-9);
  EXPECT_NEAR(t.row("window").p, 0.05654364695027354, 1e-9);
  EXPECT_NEAR(t.row("model:window").p, 0.3117527983883147, 1e-9);
}

TEST(MixedAnova, SumsOfSquaresAdd) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto t = mixed_anova(random_panel(seed, 2 + seed % 3, 6));
    double sum = 0, df = 0;
    for (const auto& r : t.rows) {
      sum += r.ss;
      df += r.df;
    }
    EXPECT_NEAR(sum, t.total_ss, 1e-6 * t.total_ss);
    EXPECT_EQ(df, t.total_df);
  }
}

TEST(MixedAnova, InvariantUnderRelabelingWithinGroup) {
  auto p = random_panel(4, 3, 6);
  const auto before = mixed_anova(p);
  std::swap(p.participants[0], p.participants[2]);
  std::swap(p.participants[0].id, p.participants[1].id);
  const auto after = mixed_anova(p);
  for (std::size_t i = 0; i < before.rows.size(); ++i) EXPECT_NEAR(before.rows[i].ss, after.rows[i].ss, 1e-10);
}

TEST(MixedAnova, ConstantPanelIsFlagged) {
  auto p = toy_panel();
  for (auto& part : p.participants) part.z = {2.0, 2.0};
  const auto t = mixed_anova(p);
  EXPECT_TRUE(t.degenerate);
  for (const auto& r : t.rows) EXPECT_EQ(r.ss, 0.0);
  EXPECT_TRUE(std::isnan(t.row("window").f));
}

TEST(MixedAnova, RejectsUnbalanced) {
  auto p = toy_panel();
  p.participants[1].z.pop_back();
  EXPECT_THROW(mixed_anova(p), Error);
}

TEST(Slopes, Examples) {
  EXPECT_DOUBLE_EQ(ols_slope(std::vector<double>{1, 2, 3, 4, 5, 6}), 1.0);
  EXPECT_DOUBLE_EQ(ols_slope(std::vector<double>{3, 3, 3, 3, 3, 3}), 0.0);
  ScorePanel p;
  p.groups = {"A"};
  p.windows = 3;
  p.participants = {{"flat", 0, {1, 1, 1}}, {"down", 0, {3, 2, 1}}, {"up", 0, {0, 1, 1}}};
  const auto ex = exclude_negative_slope(p);
  EXPECT_EQ(ex.kept, (std::vector<bool>{true, false, true}));
  ASSERT_EQ(ex.retained.participants.size(), 2u);
  EXPECT_EQ(ex.retained.participants[1].id, "up");
}

TEST(TTests, WelchHandComputed) {
  const std::vector<double> a{1.0, 2.5, 3.0, 4.5}, b{2.0, 4.0, 6.5, 7.0};
  double df = 0;
  bool degenerate = true;
  EXPECT_NEAR(welch_t_statistic(a, b, df, degenerate), -1.5540404701068133, 1e-9);
  EXPECT_NEAR(df, 5.016061026712159, 1e-9);
  EXPECT_FALSE(degenerate);
}

TEST(TTests, PairedHandComputed) {
  const std::vector<double> a{1, 2, 4, 7}, b{2, 2.5, 6, 9};
  double df = 0;
  bool degenerate = true;
  const double t = paired_t_statistic(a, b, df, degenerate);
  // differences 1, .5, 2, 2: mean 11/8, sd sqrt(0.5625), t = 1.375 / (0.75 / 2)
  EXPECT_NEAR(t, 11.0 / 3.0, 1e-12);
  EXPECT_EQ(df, 3);
  boost::math::students_t dist(3);
  EXPECT_NEAR(2 * boost::math::cdf(boost::math::complement(dist, t)), 0.03508151471548193, 1e-9);
}

TEST(TTests, IdenticalAndConstantShift) {
  const std::vector<double> a{1, 2, 4}, shifted{2, 3, 5};
  double df = 0;
  bool degenerate = true;
  EXPECT_EQ(paired_t_statistic(a, a, df, degenerate), 0.0);
  EXPECT_FALSE(degenerate);
  paired_t_statistic(a, shifted, df, degenerate);
  EXPECT_TRUE(degenerate);
}

TEST(Pairwise, FamilyLayoutAndShiftInvariance) {
  auto p = random_panel(7, 4, 6);
  const auto tests = pairwise_tests(p);
  std::size_t paired = 0, welch = 0;
  for (const auto& t : tests) (t.kind == "paired" ? paired : welch)++;
  EXPECT_EQ(paired, 4u * 5u);
  EXPECT_EQ(welch, 3u * 6u);
  for (auto& part : p.participants)
    for (auto& z : part.z) z += 17.5;
  const auto shifted = pairwise_tests(p);
  for (std::size_t i = 0; i < tests.size(); ++i) {
    EXPECT_NEAR(tests[i].p, shifted[i].p, 1e-9);
    EXPECT_GE(tests[i].p_adjusted, tests[i].p);
  }
}

TEST(Pairwise, IdenticalWindowsGivePOne) {
  ScorePanel p;
  p.groups = {"A"};
  p.windows = 2;
  p.participants = {{"a", 0, {1, 1}}, {"b", 0, {2, 2}}, {"c", 0, {0, 0}}};
  const auto tests = pairwise_tests(p);
  ASSERT_EQ(tests.size(), 1u);
  EXPECT_EQ(tests[0].t, 0.0);
  EXPECT_EQ(tests[0].p, 1.0);
}

TEST(BenjaminiHochberg, Examples) {
  EXPECT_EQ(bh_adjust(std::vector<double>{0.03}), (std::vector<double>{0.03}));
  const auto same = bh_adjust(std::vector<double>{0.2, 0.2, 0.2});
  for (double v : same) EXPECT_DOUBLE_EQ(v, 0.2);
  const auto four = bh_adjust(std::vector<double>{0.01, 0.02, 0.03, 0.04});
  for (double v : four) EXPECT_NEAR(v, 0.04, 1e-15);
  const auto mixed = bh_adjust(std::vector<double>{0.04, 0.001, 0.9, 0.02});
  EXPECT_NEAR(mixed[1], 0.004, 1e-15);
  EXPECT_NEAR(mixed[3], 0.04, 1e-15);
  EXPECT_NEAR(mixed[0], 0.04 * 4 / 3, 1e-15);
  EXPECT_NEAR(mixed[2], 0.9, 1e-15);
}

TEST(BenjaminiHochberg, MonotoneAndDominatesRaw) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> p(40);
  for (auto& v : p) v = u(gen) * u(gen);
  const auto adj = bh_adjust(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_GE(adj[i], p[i]);
    EXPECT_LE(adj[i], 1.0);
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[i] <= p[k]) EXPECT_LE(adj[i], adj[k]);
  }
}

TEST(Stars, Banding) {
  EXPECT_EQ(significance_stars(0.00005), "***");
  EXPECT_EQ(significance_stars(0.005), "**");
  EXPECT_EQ(significance_stars(0.03), "*");
  EXPECT_EQ(significance_stars(0.07), "o");
  EXPECT_EQ(significance_stars(0.2), "");
  EXPECT_EQ(significance_stars(std::nan("")), "");
}

TEST(AnovaOutput, CsvAndJson) {
  const auto t = mixed_anova(toy_panel());
  const auto csv = to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "source,ss,df,ms,F,p,stars");
  const auto j = to_json(t);
  EXPECT_TRUE(j.contains("rows"));
}

}  // namespace
}  // namespace ctm
