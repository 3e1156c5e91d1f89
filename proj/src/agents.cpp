#include "ctm/agents.hpp"

#include <charconv>

#include "ctm/error.hpp"
#include "ctm/model_io.hpp"
#include "ctm/rng.hpp"

namespace ctm {
namespace {

double parse_param(std::string_view text, std::string_view key) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || text.substr(0, eq) != key) {
    throw Error(ErrorCode::kInvalidArgument, "expected '" + std::string(key) + "=<value>'");
  }
  const auto value = text.substr(eq + 1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kInvalidArgument, "bad number '" + std::string(value) + "'");
  }
  return v;
}

constexpr std::uint64_t kDrawStream = 0;
constexpr std::uint64_t kCoinStream = 1;

}  // namespace

void AgentSpec::validate() const {
  if (kind == AgentKind::kUndermatching && !(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be in [0,1]");
  }
  if (kind == AgentKind::kSelfDependent && !(rho >= 0.0 && rho <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must be in [0,1]");
  }
  if (kind != AgentKind::kUniform && !belief) {
    throw Error(ErrorCode::kIncompleteModel, "agent '" + describe() + "' needs a belief model");
  }
}

std::string AgentSpec::describe() const {
  switch (kind) {
    case AgentKind::kMatching: return "matching";
    case AgentKind::kMaximizing: return "maximizing";
    case AgentKind::kUniform: return "uniform";
    case AgentKind::kUndermatching: return "undermatch:eps=" + std::to_string(epsilon);
    case AgentKind::kSelfDependent: return "self:rho=" + std::to_string(rho);
    case AgentKind::kFixedTree: return "fixed:model=" + (belief ? belief->name() : std::string("?"));
  }
  return "?";
}

AgentSpec parse_agent_spec(std::string_view text, std::shared_ptr<const ContextTreeModel> kicker_model) {
  AgentSpec spec;
  spec.belief = std::move(kicker_model);
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "matching") {
    spec.kind = AgentKind::kMatching;
  } else if (head == "maximizing") {
    spec.kind = AgentKind::kMaximizing;
  } else if (head == "uniform" || head == "uniform-random") {
    spec.kind = AgentKind::kUniform;
  } else if (head == "undermatch" || head == "undermatching") {
    spec.kind = AgentKind::kUndermatching;
    spec.epsilon = parse_param(rest, "eps");
  } else if (head == "self" || head == "self-dependent") {
    spec.kind = AgentKind::kSelfDependent;
    spec.rho = parse_param(rest, "rho");
  } else if (head == "fixed" || head == "fixed-tree") {
    spec.kind = AgentKind::kFixedTree;
    if (!rest.starts_with("model=")) throw Error(ErrorCode::kInvalidArgument, "expected fixed:model=<name>");
    spec.belief = std::make_shared<const ContextTreeModel>(load_model(rest.substr(6)));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown agent '" + std::string(text) + "'");
  }
  spec.validate();
  return spec;
}

std::vector<Symbol> run_agent(const AgentSpec& spec, std::span<const Symbol> kicker,
                              std::uint64_t seed, std::uint64_t replicate) {
  spec.validate();
  const int alphabet = spec.belief ? spec.belief->alphabet_size() : kGoalkeeperAlphabet;
  for (Symbol s : kicker) {
    if (s >= alphabet) throw Error(ErrorCode::kBadSymbol, "kicker symbol " + std::to_string(s));
  }
  Rng draw(seed, agent_stream(replicate, kDrawStream));
  Rng coin(seed, agent_stream(replicate, kCoinStream));
  const auto A = static_cast<std::uint32_t>(alphabet);

  std::vector<Symbol> y(kicker.size());
  for (std::size_t t = 0; t < kicker.size(); ++t) {
    const auto past = kicker.first(t);
    const auto ctx = spec.belief ? spec.belief->tree().find(past) : std::nullopt;

    auto sample_belief = [&]() -> Symbol {
      if (!ctx) return static_cast<Symbol>(draw.below(A));
      return static_cast<Symbol>(draw.categorical(spec.belief->probs(*ctx)));
    };

    switch (spec.kind) {
      case AgentKind::kMatching:
      case AgentKind::kFixedTree:
        y[t] = sample_belief();
        break;
      case AgentKind::kMaximizing:
        y[t] = ctx ? spec.belief->mode(*ctx) : static_cast<Symbol>(draw.below(A));
        break;
      case AgentKind::kUniform:
        y[t] = static_cast<Symbol>(draw.below(A));
        break;
      case AgentKind::kUndermatching:
        y[t] = coin.uniform() < spec.epsilon ? static_cast<Symbol>(coin.below(A)) : sample_belief();
        break;
      case AgentKind::kSelfDependent:
        y[t] = (t > 0 && coin.uniform() < spec.rho) ? y[t - 1] : sample_belief();
        break;
    }
  }
  return y;
}

}  // namespace ctm
