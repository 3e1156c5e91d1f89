#include <gtest/gtest.h>

#include <cmath>

#include "ctm/agents.hpp"
#include "ctm/error.hpp"
#include "ctm/model_io.hpp"
#include "ctm/simulate.hpp"
#include "ctm/windows.hpp"

namespace ctm {
namespace {

std::shared_ptr<const ContextTreeModel> model3() {
  return std::make_shared<const ContextTreeModel>(preset_model("model3"));
}

double score(const std::vector<Symbol>& x, const std::vector<Symbol>& y) {
  PairedSample s;
  s.x = x;
  s.y = y;
  return pcp(s, {1, x.size()});
}

TEST(Agents, MaximizingAndMatchingScores) {
  const auto m = model3();
  const auto x = simulate(*m, 250000, 4);
  EXPECT_NEAR(score(x, run_agent(parse_agent_spec("maximizing", m), x, 4)), 5.0 / 6.0, 0.003);
  EXPECT_NEAR(score(x, run_agent(parse_agent_spec("matching", m), x, 4)), 0.75, 0.003);
}

TEST(Agents, UniformScoresOneThird) {
  const auto m = model3();
  const std::size_t n = 90000;
  const auto x = simulate(*m, n, 6);
  const double sd = std::sqrt((1.0 / 3) * (2.0 / 3) / n);
  EXPECT_NEAR(score(x, run_agent(parse_agent_spec("uniform", m), x, 6)), 1.0 / 3, 4 * sd);
}

TEST(Agents, SelfDependentAtZeroIsMatching) {
  const auto m = model3();
  const auto x = simulate(*m, 2000, 1);
  EXPECT_EQ(run_agent(parse_agent_spec("self:rho=0", m), x, 9), run_agent(parse_agent_spec("matching", m), x, 9));
  EXPECT_EQ(run_agent(parse_agent_spec("undermatch:eps=0", m), x, 9),
            run_agent(parse_agent_spec("matching", m), x, 9));
}

TEST(Agents, SelfDependentRepeats) {
  const auto m = model3();
  const auto x = simulate(*m, 5000, 1);
  const auto y = run_agent(parse_agent_spec("self:rho=1", m), x, 2);
  for (std::size_t t = 1; t < y.size(); ++t) EXPECT_EQ(y[t], y[0]);
}

TEST(Agents, NoLookahead) {
  const auto m = model3();
  auto x = simulate(*m, 600, 3);
  for (const char* spec : {"matching", "maximizing", "undermatch:eps=0.4", "self:rho=0.5", "uniform"}) {
    const auto agent = parse_agent_spec(spec, m);
    const auto y = run_agent(agent, x, 5);
    auto x2 = x;
    for (std::size_t t = 300; t < x2.size(); ++t) x2[t] = static_cast<Symbol>((x2[t] + 1) % 3);
    const auto y2 = run_agent(agent, x2, 5);
    // y[t] may depend on x[0..t-1] only, so the first 301 guesses agree.
    for (std::size_t t = 0; t <= 300; ++t) ASSERT_EQ(y[t], y2[t]) << spec << " t=" << t;
  }
}

TEST(Agents, DeterministicGivenSeed) {
  const auto m = model3();
  const auto x = simulate(*m, 800, 3);
  const auto a = parse_agent_spec("undermatch:eps=0.3", m);
  EXPECT_EQ(run_agent(a, x, 12), run_agent(a, x, 12));
  EXPECT_NE(run_agent(a, x, 12), run_agent(a, x, 13));
  EXPECT_NE(run_agent(a, x, 12, 0), run_agent(a, x, 12, 1));
}

TEST(Agents, FixedTreeUsesOwnModel) {
  const auto m = model3();
  auto belief = std::make_shared<const ContextTreeModel>(build_model(
      {{Context::parse("0"), {0, 0, 1}}, {Context::parse("1"), {1, 0, 0}}, {Context::parse("2"), {0, 1, 0}}}, 3, "f"));
  AgentSpec spec;
  spec.kind = AgentKind::kFixedTree;
  spec.belief = belief;
  const auto x = simulate(*m, 100, 1);
  const auto y = run_agent(spec, x, 1);
  const Symbol expected[] = {2, 0, 1};
  for (std::size_t t = 1; t < x.size(); ++t) EXPECT_EQ(y[t], expected[x[t - 1]]);
}

TEST(Agents, ParseErrors) {
  const auto m = model3();
  EXPECT_THROW(parse_agent_spec("clever", m), Error);
  EXPECT_THROW(parse_agent_spec("self:rho=1.5", m), Error);
  EXPECT_THROW(parse_agent_spec("undermatch:eps=-0.1", m), Error);
  EXPECT_THROW(parse_agent_spec("self:p=0.5", m), Error);
  try {
    parse_agent_spec("matching", nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteModel);
  }
}

TEST(Agents, DescribeRoundTrips) {
  const auto m = model3();
  for (const char* spec : {"matching", "maximizing", "uniform", "self:rho=0.250000"}) {
    EXPECT_EQ(parse_agent_spec(spec, m).describe(), spec);
  }
}

}  // namespace
}  // namespace ctm
