#include "ctm/montecarlo.hpp"

#include "ctm/bic.hpp"
#include "ctm/error.hpp"
#include "ctm/lr_test.hpp"
#include "ctm/parallel.hpp"
#include "ctm/rng.hpp"
#include "ctm/simulate.hpp"
#include "ctm/windows.hpp"

namespace ctm {
namespace {

PairedSample simulate_session(const ContextTreeModel& kicker, const AgentSpec& agent, std::size_t n,
                              std::uint64_t seed, std::uint64_t replicate) {
  PairedSample s;
  s.alphabet_size = kicker.alphabet_size();
  s.x = simulate(kicker, n, seed, kicker_stream(replicate));
  s.y = run_agent(agent, s.x, seed, replicate);
  return s;
}

AgentSpec believing(AgentKind kind, const ContextTreeModel& model) {
  AgentSpec spec;
  spec.kind = kind;
  spec.belief = std::shared_ptr<const ContextTreeModel>(&model, [](const ContextTreeModel*) {});
  return spec;
}

}  // namespace

StrategyScoreSamples strategy_score_samples(const ContextTreeModel& model, std::size_t m,
                                            std::size_t replicates, std::uint64_t seed, int threads) {
  if (m == 0 || replicates == 0) throw Error(ErrorCode::kInvalidArgument, "m and replicates must be > 0");
  const auto history = static_cast<std::size_t>(model.height());
  const std::size_t total = history + m;
  const auto A = static_cast<std::uint32_t>(model.alphabet_size());
  const auto& tree = model.tree();

  StrategyScoreSamples out;
  out.matching.resize(replicates);
  out.maximizing.resize(replicates);

  // Fused kernel: one kicker stream and both agents in a single pass with a
  // per-replicate buffer. RNG consumption mirrors simulate() + run_agent().
  parallel_for(replicates, threads, [&](std::size_t r) {
    KickerStream kicker(model, seed, kicker_stream(r));
    std::vector<Symbol> x(total);
    for (auto& s : x) s = kicker.next();

    Rng draw(seed, agent_stream(r, 0));
    Rng max_draw(seed, agent_stream(r, 0));
    std::size_t hit_match = 0, hit_max = 0;
    for (std::size_t t = 0; t < total; ++t) {
      const auto ctx = tree.find(std::span<const Symbol>(x.data(), t));
      Symbol guess_match, guess_max;
      if (ctx) {
        guess_match = static_cast<Symbol>(draw.categorical(model.probs(*ctx)));
        guess_max = model.mode(*ctx);
      } else {
        guess_match = static_cast<Symbol>(draw.below(A));
        guess_max = static_cast<Symbol>(max_draw.below(A));
      }
      if (t >= history) {
        hit_match += guess_match == x[t];
        hit_max += guess_max == x[t];
      }
    }
    out.matching[r] = static_cast<double>(hit_match) / static_cast<double>(m);
    out.maximizing[r] = static_cast<double>(hit_max) / static_cast<double>(m);
  });
  return out;
}

StrategyScoreSamples strategy_score_samples_serial(const ContextTreeModel& model, std::size_t m,
                                                   std::size_t replicates, std::uint64_t seed) {
  if (m == 0 || replicates == 0) throw Error(ErrorCode::kInvalidArgument, "m and replicates must be > 0");
  const auto history = static_cast<std::size_t>(model.height());
  const AgentSpec matching = believing(AgentKind::kMatching, model);
  const AgentSpec maximizing = believing(AgentKind::kMaximizing, model);
  const TrialRange scored{history + 1, history + m};

  StrategyScoreSamples out;
  for (std::size_t r = 0; r < replicates; ++r) {
    PairedSample s;
    s.alphabet_size = model.alphabet_size();
    s.x = simulate(model, history + m, seed, kicker_stream(r));
    s.y = run_agent(matching, s.x, seed, r);
    out.matching.push_back(pcp(s, scored));
    s.y = run_agent(maximizing, s.x, seed, r);
    out.maximizing.push_back(pcp(s, scored));
  }
  return out;
}

std::vector<double> agent_pcp_samples(const ContextTreeModel& model, const AgentSpec& agent,
                                      std::size_t n, std::size_t replicates, std::uint64_t seed,
                                      int threads) {
  std::vector<double> out(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    const PairedSample s = simulate_session(model, agent, n, seed, r);
    out[r] = pcp(s, {1, n});
  });
  return out;
}

RejectionStats lr_rejection_rate(const ContextTreeModel& kicker, const AgentSpec& agent, std::size_t n,
                                 int k_prime, int k, double alpha, std::size_t replicates,
                                 std::uint64_t seed, int threads) {
  std::vector<char> reject(replicates, 0), degenerate(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    const LRDecision d = lr_test(simulate_session(kicker, agent, n, seed, r), k_prime, k, alpha);
    reject[r] = d.reject;
    degenerate[r] = d.result.degenerate;
  });
  RejectionStats out;
  out.replicates = replicates;
  for (std::size_t r = 0; r < replicates; ++r) {
    out.rejections += static_cast<std::size_t>(reject[r]);
    out.degenerate += static_cast<std::size_t>(degenerate[r]);
  }
  return out;
}

RejectionStats lr_rejection_rate_serial(const ContextTreeModel& kicker, const AgentSpec& agent,
                                        std::size_t n, int k_prime, int k, double alpha,
                                        std::size_t replicates, std::uint64_t seed) {
  RejectionStats out;
  out.replicates = replicates;
  for (std::size_t r = 0; r < replicates; ++r) {
    const LRDecision d = lr_test(simulate_session(kicker, agent, n, seed, r), k_prime, k, alpha);
    out.rejections += d.reject;
    out.degenerate += d.result.degenerate;
  }
  return out;
}

RecoveryStats planted_recovery(const ContextTreeModel& kicker, const AgentSpec& agent,
                               const ContextTree& target, std::size_t n, int max_height,
                               const std::vector<double>& grid, std::size_t replicates,
                               std::uint64_t seed, int threads) {
  RecoveryStats out;
  out.replicates = replicates;
  out.chosen_penalty.resize(replicates);
  out.trees.resize(replicates);
  std::vector<char> hit(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    const TuneResult tuned = tune_penalty(simulate_session(kicker, agent, n, seed, r), max_height, grid, 1, 1);
    out.chosen_penalty[r] = tuned.penalty;
    out.trees[r] = tuned.result.tree.describe();
    hit[r] = tuned.result.tree == target;
  });
  for (char h : hit) out.recovered += static_cast<std::size_t>(h);
  return out;
}

RecoveryStats planted_recovery_serial(const ContextTreeModel& kicker, const AgentSpec& agent,
                                      const ContextTree& target, std::size_t n, int max_height,
                                      const std::vector<double>& grid, std::size_t replicates,
                                      std::uint64_t seed) {
  RecoveryStats out;
  out.replicates = replicates;
  for (std::size_t r = 0; r < replicates; ++r) {
    const PairedSample s = simulate_session(kicker, agent, n, seed, r);
    const TuneResult tuned = tune_penalty(s, max_height, grid, 1, 1);
    out.chosen_penalty.push_back(tuned.penalty);
    out.trees.push_back(tuned.result.tree.describe());
    out.recovered += tuned.result.tree == target;
  }
  return out;
}

}  // namespace ctm
