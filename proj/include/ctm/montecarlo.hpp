#pragma once

// Replicate-parallel Monte Carlo kernels.
//
// Every replicate r draws from its own RNG streams (kicker: r*4, agent draws:
// r*4+2, agent coin: r*4+3) and writes only slot r of the output, so results
// do not depend on the thread count or schedule. Each kernel has a *_serial
// twin written as a direct composition of the module operations; tests assert
// the two agree bit for bit.

#include <cstdint>
#include <vector>

#include "ctm/agents.hpp"
#include "ctm/context_tree.hpp"

namespace ctm {

inline std::uint64_t kicker_stream(std::uint64_t replicate) { return replicate * 4; }

struct StrategyScoreSamples {
  std::vector<double> matching;
  std::vector<double> maximizing;
};

// Per replicate: simulate height + m kicker symbols, let the matching and the
// maximizing agent (both believing the true model) respond, and record each
// agent's PCP over the last m trials. The first `height` trials only serve as
// visible history so every scored guess has a full context.
StrategyScoreSamples strategy_score_samples(const ContextTreeModel& model, std::size_t m,
                                            std::size_t replicates, std::uint64_t seed,
                                            int threads = 0);
StrategyScoreSamples strategy_score_samples_serial(const ContextTreeModel& model, std::size_t m,
                                                   std::size_t replicates, std::uint64_t seed);

// PCP of `agent` against kicker `model` over n trials, one value per replicate.
std::vector<double> agent_pcp_samples(const ContextTreeModel& model, const AgentSpec& agent,
                                      std::size_t n, std::size_t replicates, std::uint64_t seed,
                                      int threads = 0);

struct RejectionStats {
  std::size_t replicates = 0;
  std::size_t rejections = 0;
  std::size_t degenerate = 0;
  double rate() const noexcept {
    return replicates ? static_cast<double>(rejections) / static_cast<double>(replicates) : 0.0;
  }
};

// LR independence test applied to `replicates` simulated sessions.
RejectionStats lr_rejection_rate(const ContextTreeModel& kicker, const AgentSpec& agent, std::size_t n,
                                 int k_prime, int k, double alpha, std::size_t replicates,
                                 std::uint64_t seed, int threads = 0);
RejectionStats lr_rejection_rate_serial(const ContextTreeModel& kicker, const AgentSpec& agent,
                                        std::size_t n, int k_prime, int k, double alpha,
                                        std::size_t replicates, std::uint64_t seed);

struct RecoveryStats {
  std::size_t replicates = 0;
  std::size_t recovered = 0;
  std::vector<double> chosen_penalty;  // per replicate
  std::vector<std::string> trees;      // per replicate, ContextTree::describe()
  double rate() const noexcept {
    return replicates ? static_cast<double>(recovered) / static_cast<double>(replicates) : 0.0;
  }
};

// Simulate kicker + agent, tune the penalty, and count exact recoveries of `target`.
RecoveryStats planted_recovery(const ContextTreeModel& kicker, const AgentSpec& agent,
                               const ContextTree& target, std::size_t n, int max_height,
                               const std::vector<double>& grid, std::size_t replicates,
                               std::uint64_t seed, int threads = 0);
RecoveryStats planted_recovery_serial(const ContextTreeModel& kicker, const AgentSpec& agent,
                                      const ContextTree& target, std::size_t n, int max_height,
                                      const std::vector<double>& grid, std::size_t replicates,
                                      std::uint64_t seed);

}  // namespace ctm
