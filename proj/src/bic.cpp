#include "ctm/bic.hpp"

#include <algorithm>
#include <cmath>

#include "ctm/error.hpp"
#include "ctm/parallel.hpp"

namespace ctm {

bool CandidateNode::is_leaf() const noexcept {
  return std::all_of(children.begin(), children.end(), [](std::int32_t c) { return c < 0; });
}

std::int32_t CandidateTree::find(const Context& context) const noexcept {
  std::int32_t node = 0;
  for (std::size_t i = context.size(); i-- > 0 && node >= 0;) {
    if (context[i] >= alphabet_) return -1;
    node = nodes_[static_cast<std::size_t>(node)].children[context[i]];
  }
  return node;
}

CandidateTree count_statistics(const PairedSample& sample, int max_height, std::uint32_t min_count) {
  sample.validate();
  if (max_height < 1) throw Error(ErrorCode::kInvalidArgument, "L must be >= 1");
  const std::size_t n = sample.size();
  if (n <= static_cast<std::size_t>(max_height)) {
    throw Error(ErrorCode::kSampleTooShort,
                "n = " + std::to_string(n) + " must exceed L = " + std::to_string(max_height));
  }
  const int alphabet = sample.alphabet_size;
  const auto A = static_cast<std::size_t>(alphabet);

  // Raw trie over every observed string, children keyed by the older symbol.
  struct Raw {
    std::vector<std::uint32_t> counts;
    std::array<std::int32_t, kMaxAlphabet> child;
  };
  std::vector<Raw> raw;
  auto new_raw = [&] {
    Raw r;
    r.counts.assign(A, 0);
    r.child.fill(-1);
    raw.push_back(std::move(r));
    return static_cast<std::int32_t>(raw.size() - 1);
  };
  new_raw();

  // t runs over 0..n-1 (1-based time); the response is y_{t+1} = y[t] and the
  // context of length d reads x_{t-d+1..t} = x[t-d..t-1].
  for (std::size_t t = 0; t < n; ++t) {
    const Symbol target = sample.y[t];
    std::int32_t node = 0;
    ++raw[0].counts[target];
    const std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(max_height), t);
    for (std::size_t d = 1; d <= depth; ++d) {
      const Symbol older = sample.x[t - d];
      std::int32_t next = raw[static_cast<std::size_t>(node)].child[older];
      if (next < 0) {
        next = new_raw();
        raw[static_cast<std::size_t>(node)].child[older] = next;
      }
      node = next;
      ++raw[static_cast<std::size_t>(node)].counts[target];
    }
  }

  CandidateTree tree;
  tree.max_height_ = max_height;
  tree.n_ = n;
  tree.alphabet_ = alphabet;
  tree.min_count_ = std::max<std::uint32_t>(min_count, 1);

  // Breadth-first copy of the admissible part; every node's count dominates
  // its children's, so dropping an inadmissible node drops its subtree.
  struct Pending {
    std::int32_t raw_index;
    std::int32_t parent;
    Context context;
  };
  std::vector<Pending> queue{{0, -1, Context{}}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Pending p = queue[head];
    const Raw& r = raw[static_cast<std::size_t>(p.raw_index)];
    CandidateNode node;
    node.context = p.context;
    node.counts = r.counts;
    node.parent = p.parent;
    node.children.fill(-1);
    for (auto c : node.counts) node.total += c;
    if (node.total < tree.min_count_ && p.parent >= 0) continue;
    node.df = -1;
    for (auto c : node.counts) {
      if (c == 0) continue;
      ++node.df;
      node.log_likelihood += c * std::log(static_cast<double>(c) / node.total);
    }
    const auto index = static_cast<std::int32_t>(tree.nodes_.size());
    if (p.parent >= 0) {
      tree.nodes_[static_cast<std::size_t>(p.parent)].children[p.context[0]] = index;
    }
    tree.nodes_.push_back(std::move(node));
    for (int b = 0; b < alphabet; ++b) {
      if (r.child[b] >= 0) {
        queue.push_back({r.child[b], index, p.context.extended(static_cast<Symbol>(b))});
      }
    }
  }
  return tree;
}

EstimationResult bic_select(const CandidateTree& candidate, double penalty, std::size_t n) {
  if (!(penalty > 0.0)) throw Error(ErrorCode::kInvalidArgument, "penalty c must be > 0");
  if (n < 2) throw Error(ErrorCode::kSampleTooShort, "n must be >= 2");
  const double log_n = std::log(static_cast<double>(n));
  const auto& nodes = candidate.nodes();

  EstimationResult out;
  out.penalty = penalty;
  out.max_height = candidate.max_height();
  out.n = n;
  out.decisions.resize(nodes.size());

  // Children always have larger indices (breadth-first), so a reverse sweep
  // visits leaves before their parents.
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const CandidateNode& w = nodes[i];
    NodeDecision& d = out.decisions[i];
    d.own = w.log_likelihood - penalty * w.df * log_n;
    if (w.is_leaf()) {
      d.value = d.own;
      d.split = false;
      continue;
    }
    d.children = 0.0;
    for (auto c : w.children) {
      if (c >= 0) d.children += out.decisions[static_cast<std::size_t>(c)].value;
    }
    d.split = d.children > d.own;
    d.value = d.split ? d.children : d.own;
  }
  out.penalized_log_likelihood = out.decisions[0].value;

  // Contexts: X = 0 with X = 1 on every proper suffix.
  std::vector<std::size_t> selected;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    if (!out.decisions[i].split) {
      selected.push_back(i);
      continue;
    }
    for (auto c : nodes[i].children) {
      if (c >= 0) stack.push_back(static_cast<std::size_t>(c));
    }
  }

  std::vector<Context> contexts;
  for (auto i : selected) contexts.push_back(nodes[i].context);
  out.tree = ContextTree::make(contexts, candidate.alphabet_size(), Completeness::kAllowPartial);
  out.q.resize(out.tree.size());
  out.counts.resize(out.tree.size());
  for (auto i : selected) {
    const auto k = *out.tree.index_of(nodes[i].context);
    out.counts[k] = nodes[i].counts;
    out.q[k].resize(nodes[i].counts.size());
    for (std::size_t a = 0; a < nodes[i].counts.size(); ++a) {
      out.q[k][a] = static_cast<double>(nodes[i].counts[a]) / nodes[i].total;
    }
  }
  return out;
}

EstimationResult estimate_tree(const PairedSample& sample, int max_height, double penalty,
                               std::uint32_t min_count) {
  const auto candidate = count_statistics(sample, max_height, min_count);
  return bic_select(candidate, penalty, sample.size());
}

TreePredictor::TreePredictor(const CandidateTree& candidate, const EstimationResult& result)
    : candidate_(&candidate), result_(&result) {}

Symbol TreePredictor::predict(std::span<const Symbol> past) const {
  const auto& nodes = candidate_->nodes();
  std::size_t node = 0;
  std::size_t depth = 0;
  while (result_->decisions[node].split && depth < past.size()) {
    const Symbol s = past[past.size() - 1 - depth];
    const auto child = s < kMaxAlphabet ? nodes[node].children[s] : -1;
    if (child < 0) break;
    node = static_cast<std::size_t>(child);
    ++depth;
  }
  const auto& counts = nodes[node].counts;
  return static_cast<Symbol>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

std::vector<double> default_penalty_grid() { return {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0}; }

TuneResult tune_penalty(const PairedSample& sample, int max_height, std::span<const double> grid,
                        std::uint32_t min_count, int threads) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty penalty grid");
  for (double c : grid) {
    if (!(c > 0.0)) throw Error(ErrorCode::kInvalidArgument, "penalties must be > 0");
  }
  sample.validate();
  const std::size_t n = sample.size();
  const auto fit_size = static_cast<std::size_t>(std::floor((1.0 - kHoldoutFraction) * static_cast<double>(n)));
  if (fit_size <= static_cast<std::size_t>(max_height) || fit_size >= n) {
    throw Error(ErrorCode::kSampleTooShort, "sample of " + std::to_string(n) +
                                                " trials is too short to split for tuning");
  }

  const PairedSample fit = sample.slice(0, fit_size);
  const CandidateTree candidate = count_statistics(fit, max_height, min_count);

  TuneResult out;
  out.grid.assign(grid.begin(), grid.end());
  out.holdout_error.assign(grid.size(), 0.0);
  out.fit_size = fit_size;
  out.holdout_size = n - fit_size;

  const std::span<const Symbol> xs(sample.x);
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    const EstimationResult r = bic_select(candidate, out.grid[g], fit_size);
    const TreePredictor predictor(candidate, r);
    std::size_t errors = 0;
    for (std::size_t j = fit_size; j < n; ++j) {
      if (predictor.predict(xs.first(j)) != sample.y[j]) ++errors;
    }
    out.holdout_error[g] = static_cast<double>(errors) / static_cast<double>(n - fit_size);
  });

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const bool better = out.holdout_error[g] < out.holdout_error[best];
    const bool tie_larger = out.holdout_error[g] == out.holdout_error[best] && out.grid[g] > out.grid[best];
    if (better || tie_larger) best = g;
  }
  out.penalty = out.grid[best];
  out.result = estimate_tree(sample, max_height, out.penalty, min_count);
  return out;
}

nlohmann::json to_json(const EstimationResult& result) {
  nlohmann::json j;
  j["c"] = result.penalty;
  j["L"] = result.max_height;
  j["n"] = result.n;
  j["penalized_log_likelihood"] = result.penalized_log_likelihood;
  auto& contexts = j["contexts"] = nlohmann::json::array();
  auto& q = j["q"] = nlohmann::json::array();
  auto& counts = j["counts"] = nlohmann::json::array();
  for (std::size_t i = 0; i < result.tree.size(); ++i) {
    contexts.push_back(result.tree.contexts()[i].label());
    q.push_back(result.q[i]);
    counts.push_back(result.counts[i]);
  }
  return j;
}

nlohmann::json to_json(const TuneResult& tune) {
  auto j = to_json(tune.result);
  j["tuning"] = {{"grid", tune.grid},
                 {"holdout_error", tune.holdout_error},
                 {"fit_size", tune.fit_size},
                 {"holdout_size", tune.holdout_size},
                 {"chosen", tune.penalty}};
  return j;
}

ContextTree tree_from_json(const nlohmann::json& j, int alphabet_size) {
  const auto& list = j.contains("tree") ? j.at("tree").at("contexts") : j.at("contexts");
  std::vector<Context> contexts;
  for (const auto& c : list) contexts.push_back(Context::parse(c.get<std::string>()));
  return ContextTree::make(std::move(contexts), alphabet_size, Completeness::kAllowPartial);
}

}  // namespace ctm
