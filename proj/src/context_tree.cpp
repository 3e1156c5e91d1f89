#include "ctm/context_tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctm/error.hpp"

namespace ctm {

Context::Context(std::vector<Symbol> symbols) {
  digits_.reserve(symbols.size());
  for (Symbol s : symbols) {
    if (s >= kMaxAlphabet) throw Error(ErrorCode::kBadSymbol, "symbol " + std::to_string(s));
    digits_.push_back(static_cast<char>('0' + s));
  }
}

Context Context::parse(std::string_view text) {
  if (text.empty() || text == "eps") return Context{};
  std::string digits;
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kParseError, "bad context '" + std::string(text) + "'");
    }
    digits.push_back(c);
  }
  return Context(std::move(digits), 0);
}

bool Context::is_suffix_of(const Context& other) const noexcept {
  return size() <= other.size() &&
         other.digits_.compare(other.size() - size(), size(), digits_) == 0;
}

Context Context::extended(Symbol older) const {
  return Context(std::string(1, static_cast<char>('0' + older)) + digits_, 0);
}

bool shorter_first(const Context& a, const Context& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.str() < b.str();
}

ContextTree ContextTree::make(std::vector<Context> contexts, int alphabet_size,
                              Completeness completeness) {
  if (alphabet_size < 2 || alphabet_size > kMaxAlphabet) {
    throw Error(ErrorCode::kInvalidArgument, "alphabet size must be in [2, 10]");
  }
  if (contexts.empty()) throw Error(ErrorCode::kNotComplete, "empty context set");

  ContextTree tree;
  tree.alphabet_size_ = alphabet_size;
  for (const auto& c : contexts) {
    if (static_cast<int>(c.size()) > kMaxHeight) {
      throw Error(ErrorCode::kInvalidArgument, "context '" + c.label() + "' exceeds max height");
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= alphabet_size) {
        throw Error(ErrorCode::kBadSymbol, "context '" + c.label() + "' uses symbol " +
                                               std::to_string(c[i]));
      }
    }
    tree.height_ = std::max(tree.height_, static_cast<int>(c.size()));
  }

  std::sort(contexts.begin(), contexts.end(), shorter_first);
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    for (std::size_t j = i + 1; j < contexts.size(); ++j) {
      if (contexts[i].is_suffix_of(contexts[j])) {
        throw Error(ErrorCode::kNotSuffixFree,
                    "'" + contexts[i].label() + "' is a suffix of '" + contexts[j].label() + "'");
      }
    }
  }

  // Trie read backwards: the first edge is the most recent symbol.
  tree.trie_.emplace_back();
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    const Context& c = contexts[k];
    std::size_t node = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      auto& slot = tree.trie_[node].child[c[i]];
      if (slot < 0) {
        slot = static_cast<std::int32_t>(tree.trie_.size());
        tree.trie_.emplace_back();
      }
      node = static_cast<std::size_t>(tree.trie_[node].child[c[i]]);
    }
    tree.trie_[node].context = static_cast<std::int32_t>(k);
  }

  // Complete iff every internal node has all |A| children. Report the first
  // offending internal node as a context string.
  tree.complete_ = true;
  std::vector<std::pair<std::size_t, std::string>> stack{{0, ""}};
  std::string missing;
  while (!stack.empty() && tree.complete_) {
    auto [node, path] = stack.back();
    stack.pop_back();
    if (tree.trie_[node].context >= 0) continue;
    for (int a = 0; a < alphabet_size; ++a) {
      const auto child = tree.trie_[node].child[a];
      if (child < 0) {
        tree.complete_ = false;
        missing = std::string(1, static_cast<char>('0' + a)) + path;
        break;
      }
      stack.emplace_back(static_cast<std::size_t>(child),
                         std::string(1, static_cast<char>('0' + a)) + path);
    }
  }
  if (!tree.complete_ && completeness == Completeness::kRequireComplete) {
    throw Error(ErrorCode::kNotComplete, "no context covers pasts ending in '" + missing + "'");
  }
  tree.contexts_ = std::move(contexts);
  return tree;
}

std::optional<std::size_t> ContextTree::index_of(const Context& context) const {
  auto it = std::lower_bound(contexts_.begin(), contexts_.end(), context, shorter_first);
  if (it == contexts_.end() || *it != context) return std::nullopt;
  return static_cast<std::size_t>(it - contexts_.begin());
}

std::optional<std::size_t> ContextTree::find(std::span<const Symbol> past) const noexcept {
  if (trie_.empty()) return std::nullopt;
  std::size_t node = 0;
  std::size_t remaining = past.size();
  while (true) {
    if (trie_[node].context >= 0) return static_cast<std::size_t>(trie_[node].context);
    if (remaining == 0) return std::nullopt;
    const Symbol s = past[--remaining];
    if (s >= alphabet_size_) return std::nullopt;
    const auto child = trie_[node].child[s];
    if (child < 0) return std::nullopt;
    node = static_cast<std::size_t>(child);
  }
}

std::size_t ContextTree::lookup(std::span<const Symbol> past) const {
  if (auto idx = find(past)) return *idx;
  throw Error(ErrorCode::kPastTooShort,
              "past of length " + std::to_string(past.size()) + " does not determine a context");
}

bool ContextTree::is_coarsening_of(const ContextTree& finer) const {
  for (const auto& fine : finer.contexts()) {
    bool covered = std::any_of(contexts_.begin(), contexts_.end(),
                               [&](const Context& c) { return c.is_suffix_of(fine); });
    if (!covered) return false;
  }
  return true;
}

std::string ContextTree::describe() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    if (i) os << ", ";
    os << contexts_[i].label();
  }
  os << '}';
  return os.str();
}

ContextTreeModel::ContextTreeModel(ContextTree tree, std::vector<std::vector<double>> transitions,
                                   std::string name)
    : tree_(std::move(tree)), transitions_(std::move(transitions)), name_(std::move(name)) {}

std::span<const double> ContextTreeModel::probs(const Context& context) const {
  auto idx = tree_.index_of(context);
  if (!idx) throw Error(ErrorCode::kNotFound, "context '" + context.label() + "' not in model");
  return transitions_[*idx];
}

Symbol ContextTreeModel::mode(std::size_t context_index) const noexcept {
  const auto& p = transitions_[context_index];
  return static_cast<Symbol>(std::max_element(p.begin(), p.end()) - p.begin());
}

ContextTreeModel build_model(std::vector<ContextDistribution> entries, int alphabet_size,
                             std::string name) {
  if (alphabet_size < 2 || alphabet_size > kMaxAlphabet) {
    throw Error(ErrorCode::kInvalidArgument, "alphabet size must be in [2, 10]");
  }
  std::vector<Context> contexts;
  contexts.reserve(entries.size());
  for (const auto& e : entries) {
    if (static_cast<int>(e.probs.size()) != alphabet_size) {
      throw Error(ErrorCode::kBadDistribution,
                  "context '" + e.context.label() + "': vector has " +
                      std::to_string(e.probs.size()) + " entries, expected " +
                      std::to_string(alphabet_size));
    }
    double sum = 0.0;
    for (double p : e.probs) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kBadDistribution,
                    "context '" + e.context.label() + "': entry outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw Error(ErrorCode::kBadDistribution,
                  "context '" + e.context.label() + "': probabilities sum to " + std::to_string(sum));
    }
    contexts.push_back(e.context);
  }
  ContextTree tree = ContextTree::make(contexts, alphabet_size);

  std::vector<std::vector<double>> transitions(tree.size());
  for (auto& e : entries) {
    transitions[*tree.index_of(e.context)] = std::move(e.probs);
  }
  return ContextTreeModel(std::move(tree), std::move(transitions), std::move(name));
}

const Context& context_lookup(const ContextTreeModel& model, std::span<const Symbol> past) {
  return model.tree().contexts()[model.tree().lookup(past)];
}

}  // namespace ctm
