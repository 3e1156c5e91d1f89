#include "ctm/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "ctm/error.hpp"

namespace ctm {
namespace {

constexpr double kTolerance = 1e-12;
constexpr int kMaxIterations = 100000;
constexpr std::size_t kDirectSolveLimit = 81;
constexpr std::size_t kMaxStates = 1u << 22;

struct Chain {
  std::size_t states = 1;
  int alphabet = 0;
  std::vector<std::size_t> context_of;  // per state
};

// Number of closed strongly connected components of the support graph.
// Iterative Tarjan; successors of s are (s*A + a) mod S for p(a|ctx(s)) > 0.
int count_recurrent_classes(const Chain& chain, const ContextTreeModel& model) {
  const std::size_t n = chain.states;
  const auto alphabet = static_cast<std::size_t>(chain.alphabet);
  auto successor = [&](std::size_t s, std::size_t a) { return (s * alphabet + a) % n; };

  std::vector<std::int64_t> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::int64_t counter = 0, components = 0;

  struct Frame {
    std::size_t state;
    std::size_t next_symbol;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto probs = model.probs(chain.context_of[f.state]);
      bool descended = false;
      while (f.next_symbol < alphabet) {
        const std::size_t a = f.next_symbol++;
        if (probs[a] <= 0.0) continue;
        const std::size_t w = successor(f.state, a);
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.state] = std::min(low[f.state], index[w]);
      }
      if (descended) continue;
      const std::size_t v = f.state;
      if (low[v] == index[v]) {
        while (true) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
          if (w == v) break;
        }
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().state;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }

  std::vector<char> leaks(static_cast<std::size_t>(components), 0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto probs = model.probs(chain.context_of[s]);
    for (std::size_t a = 0; a < alphabet; ++a) {
      if (probs[a] > 0.0 && comp[successor(s, a)] != comp[s]) leaks[comp[s]] = 1;
    }
  }
  return static_cast<int>(std::count(leaks.begin(), leaks.end(), 0));
}

// Solves pi (P - I) = 0 with sum(pi) = 1 by Gaussian elimination with partial
// pivoting; the last balance equation is replaced by the normalization.
bool direct_solve(const Chain& chain, const ContextTreeModel& model, std::vector<double>& pi) {
  const std::size_t n = chain.states;
  const auto alphabet = static_cast<std::size_t>(chain.alphabet);
  // Row i of the system: sum_s pi_s (P[s][i] - delta_si) = 0.
  std::vector<double> m(n * (n + 1), 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return m[r * (n + 1) + c]; };
  for (std::size_t s = 0; s < n; ++s) {
    const auto probs = model.probs(chain.context_of[s]);
    for (std::size_t a = 0; a < alphabet; ++a) at((s * alphabet + a) % n, s) += probs[a];
    at(s, s) -= 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) at(n - 1, c) = 1.0;
  at(n - 1, n) = 1.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
    }
    if (std::abs(at(pivot, col)) < 1e-14) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c <= n; ++c) std::swap(at(pivot, c), at(col, c));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = at(r, col) / at(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= n; ++c) at(r, c) -= f * at(col, c);
    }
  }
  pi.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) pi[r] = std::max(0.0, at(r, n) / at(r, r));
  return true;
}

}  // namespace

StationarySummary stationary_summary(const ContextTreeModel& model) {
  const int height = model.height();
  Chain chain;
  chain.alphabet = model.alphabet_size();
  for (int i = 0; i < height; ++i) {
    chain.states *= static_cast<std::size_t>(chain.alphabet);
    if (chain.states > kMaxStates) {
      throw Error(ErrorCode::kInvalidArgument, "too many states for a stationary solve");
    }
  }
  const std::size_t n = chain.states;
  const auto alphabet = static_cast<std::size_t>(chain.alphabet);

  chain.context_of.resize(n);
  std::vector<Symbol> past(static_cast<std::size_t>(height));
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t rest = s;
    for (int i = height - 1; i >= 0; --i) {
      past[static_cast<std::size_t>(i)] = static_cast<Symbol>(rest % alphabet);
      rest /= alphabet;
    }
    chain.context_of[s] = model.tree().lookup(past);
  }

  if (count_recurrent_classes(chain, model) > 1) {
    throw Error(ErrorCode::kReducible, "model '" + model.name() + "' has several recurrent classes");
  }

  StationarySummary out;
  // Power iteration on the lazy chain (I + P) / 2: same fixed point, and
  // aperiodic even when P is periodic (model3 has period 3).
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  bool converged = false;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    for (std::size_t s = 0; s < n; ++s) next[s] = 0.5 * pi[s];
    for (std::size_t s = 0; s < n; ++s) {
      if (pi[s] == 0.0) continue;
      const auto probs = model.probs(chain.context_of[s]);
      const double half = 0.5 * pi[s];
      for (std::size_t a = 0; a < alphabet; ++a) next[(s * alphabet + a) % n] += half * probs[a];
    }
    double diff = 0.0;
    for (std::size_t s = 0; s < n; ++s) diff += std::abs(next[s] - pi[s]);
    pi.swap(next);
    if (diff < kTolerance) {
      converged = true;
      break;
    }
  }
  out.iterations = it + 1;
  if (!converged) {
    if (n > kDirectSolveLimit || !direct_solve(chain, model, pi)) {
      throw Error(ErrorCode::kNotConverged, "stationary distribution did not converge");
    }
    out.used_direct_solve = true;
  }

  double total = 0.0;
  for (double p : pi) total += p;
  for (double& p : pi) p /= total;

  out.context_probability.assign(model.tree().size(), 0.0);
  for (std::size_t s = 0; s < n; ++s) out.context_probability[chain.context_of[s]] += pi[s];

  for (std::size_t w = 0; w < model.tree().size(); ++w) {
    const double weight = out.context_probability[w];
    const auto probs = model.probs(w);
    double h = 0.0, mx = 0.0, sq = 0.0;
    for (double p : probs) {
      if (p > 0.0) h -= p * std::log2(p);
      mx = std::max(mx, p);
      sq += p * p;
    }
    out.entropy_rate += weight * h;
    out.maximizing_score += weight * mx;
    out.matching_score += weight * sq;
  }
  out.state_probability = std::move(pi);
  return out;
}

}  // namespace ctm
