#include <gtest/gtest.h>

#include "ctm/agents.hpp"
#include "ctm/bic.hpp"
#include "ctm/model_io.hpp"
#include "ctm/montecarlo.hpp"

namespace ctm {
namespace {

TEST(MonteCarlo, StrategyScoresParallelEqualsSerial) {
  for (const char* name : {"model3", "model4"}) {
    const auto m = preset_model(name);
    const auto serial = strategy_score_samples_serial(m, 250, 300, 5);
    for (int threads : {1, 3, 8}) {
      const auto par = strategy_score_samples(m, 250, 300, 5, threads);
      EXPECT_EQ(par.matching, serial.matching) << name << ' ' << threads;
      EXPECT_EQ(par.maximizing, serial.maximizing) << name << ' ' << threads;
    }
  }
}

TEST(MonteCarlo, RejectionRateParallelEqualsSerial) {
  const auto m = std::make_shared<const ContextTreeModel>(preset_model("model3"));
  const auto agent = parse_agent_spec("self:rho=0.3", m);
  const auto serial = lr_rejection_rate_serial(*m, agent, 500, 1, 1, 0.05, 40, 9);
  const auto par = lr_rejection_rate(*m, agent, 500, 1, 1, 0.05, 40, 9, 4);
  EXPECT_EQ(par.rejections, serial.rejections);
  EXPECT_EQ(par.degenerate, serial.degenerate);
  EXPECT_EQ(par.replicates, 40u);
}

TEST(MonteCarlo, RecoveryParallelEqualsSerial) {
  const auto m = std::make_shared<const ContextTreeModel>(preset_model("model4"));
  const auto agent = parse_agent_spec("matching", m);
  const auto grid = default_penalty_grid();
  const auto serial = planted_recovery_serial(*m, agent, m->tree(), 1000, 3, grid, 12, 4);
  const auto par = planted_recovery(*m, agent, m->tree(), 1000, 3, grid, 12, 4, 4);
  EXPECT_EQ(par.recovered, serial.recovered);
  EXPECT_EQ(par.trees, serial.trees);
  EXPECT_EQ(par.chosen_penalty, serial.chosen_penalty);
}

TEST(MonteCarlo, AgentPcpSamplesAreThreadIndependent) {
  const auto m = std::make_shared<const ContextTreeModel>(preset_model("model3"));
  const auto agent = parse_agent_spec("undermatch:eps=0.2", m);
  EXPECT_EQ(agent_pcp_samples(*m, agent, 250, 64, 3, 1), agent_pcp_samples(*m, agent, 250, 64, 3, 6));
}

}  // namespace
}  // namespace ctm
