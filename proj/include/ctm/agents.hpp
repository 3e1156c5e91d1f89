#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ctm/context_tree.hpp"

namespace ctm {

enum class AgentKind { kMatching, kMaximizing, kUniform, kUndermatching, kSelfDependent, kFixedTree };

// Synthetic goalkeeper. `belief` is the model the agent assumes for the
// kicker; for kFixedTree it is the agent's own response model.
struct AgentSpec {
  AgentKind kind = AgentKind::kMatching;
  double epsilon = 0.0;  // undermatching: probability of a uniform guess
  double rho = 0.0;      // self-dependent: probability of repeating own guess
  std::shared_ptr<const ContextTreeModel> belief;

  void validate() const;
  std::string describe() const;
};

// RNG stream of one agent purpose (0 = draws, 1 = coin) for a replicate.
inline std::uint64_t agent_stream(std::uint64_t replicate, std::uint64_t purpose) {
  return replicate * 4 + purpose + 2;
}

// Parses "matching", "maximizing", "uniform", "undermatch:eps=0.2",
// "self:rho=0.5" and "fixed:model=<name|path>". The kicker model is used as
// the belief unless the spec names its own.
AgentSpec parse_agent_spec(std::string_view text, std::shared_ptr<const ContextTreeModel> kicker_model);

// Returns y with y[t] chosen from x[0..t-1] only (and own past for
// self-dependent). While the visible past is too short to identify a context
// the agent guesses uniformly. Deterministic given seed.
//
// Random streams: stream 0 drives the matching draw, stream 1 the
// undermatching/self-dependence coin, so self(rho=0) reproduces matching.
std::vector<Symbol> run_agent(const AgentSpec& spec, std::span<const Symbol> kicker,
                              std::uint64_t seed, std::uint64_t replicate = 0);

}  // namespace ctm
