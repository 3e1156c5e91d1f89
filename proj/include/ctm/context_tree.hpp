#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ctm {

using Symbol = std::uint8_t;

inline constexpr int kMaxAlphabet = 10;
inline constexpr int kMaxHeight = 16;

// Goalkeeper alphabet: 0 = left, 1 = center, 2 = right.
inline constexpr int kGoalkeeperAlphabet = 3;

// A finite string of past symbols written oldest-first: "01" means the symbol
// before last was 0 and the last symbol was 1. The empty context is the root.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<Symbol> symbols);

  // Accepts "eps" or "" for the root, otherwise a string of digits.
  static Context parse(std::string_view text);

  std::size_t size() const noexcept { return digits_.size(); }
  bool is_root() const noexcept { return digits_.empty(); }
  Symbol operator[](std::size_t i) const noexcept { return static_cast<Symbol>(digits_[i] - '0'); }
  Symbol last() const noexcept { return (*this)[size() - 1]; }

  // Digits only; the root is "".
  const std::string& str() const noexcept { return digits_; }
  // Human-facing label; the root is "eps".
  std::string label() const { return is_root() ? "eps" : digits_; }

  bool is_suffix_of(const Context& other) const noexcept;

  // b·w: the context extended one step further into the past.
  Context extended(Symbol older) const;
  // Drops the oldest symbol. Undefined for the root.
  Context parent() const { return Context(digits_.substr(1), 0); }

  auto operator<=>(const Context&) const = default;

 private:
  Context(std::string digits, int) : digits_(std::move(digits)) {}
  std::string digits_;
};

// Orders by length, then lexicographically; used for stable output.
bool shorter_first(const Context& a, const Context& b);

enum class Completeness { kRequireComplete, kAllowPartial };

// Suffix-free set of contexts with a backward-reading trie for lookups.
class ContextTree {
 public:
  ContextTree() = default;

  // Validates and builds. Throws NotSuffixFree / NotComplete / BadSymbol.
  static ContextTree make(std::vector<Context> contexts, int alphabet_size,
                          Completeness completeness = Completeness::kRequireComplete);

  const std::vector<Context>& contexts() const noexcept { return contexts_; }
  std::size_t size() const noexcept { return contexts_.size(); }
  int alphabet_size() const noexcept { return alphabet_size_; }
  int height() const noexcept { return height_; }
  bool is_complete() const noexcept { return complete_; }

  std::optional<std::size_t> index_of(const Context& context) const;

  // Index of the unique context that is a suffix of `past` (oldest-first), or
  // nullopt when the past is too short or (for partial trees) unmatched.
  std::optional<std::size_t> find(std::span<const Symbol> past) const noexcept;

  // Like find but throws PastTooShort.
  std::size_t lookup(std::span<const Symbol> past) const;

  // True if every context of `finer` has a suffix in this tree.
  bool is_coarsening_of(const ContextTree& finer) const;

  friend bool operator==(const ContextTree& a, const ContextTree& b) {
    return a.alphabet_size_ == b.alphabet_size_ && a.contexts_ == b.contexts_;
  }

  std::string describe() const;

 private:
  struct Node {
    std::array<std::int32_t, kMaxAlphabet> child;
    std::int32_t context = -1;
    Node() { child.fill(-1); }
  };

  std::vector<Context> contexts_;
  std::vector<Node> trie_;
  int alphabet_size_ = 0;
  int height_ = 0;
  bool complete_ = false;
};

class ContextTreeModel {
 public:
  ContextTreeModel() = default;
  ContextTreeModel(ContextTree tree, std::vector<std::vector<double>> transitions, std::string name);

  const ContextTree& tree() const noexcept { return tree_; }
  const std::string& name() const noexcept { return name_; }
  int alphabet_size() const noexcept { return tree_.alphabet_size(); }
  int height() const noexcept { return tree_.height(); }

  std::span<const double> probs(std::size_t context_index) const noexcept {
    return transitions_[context_index];
  }
  std::span<const double> probs(const Context& context) const;
  const std::vector<std::vector<double>>& transitions() const noexcept { return transitions_; }

  // Most probable symbol of a context; ties go to the lowest symbol.
  Symbol mode(std::size_t context_index) const noexcept;

 private:
  ContextTree tree_;
  std::vector<std::vector<double>> transitions_;
  std::string name_;
};

struct ContextDistribution {
  Context context;
  std::vector<double> probs;
};

// Validated construction. Errors: NotSuffixFree, NotComplete, BadDistribution.
ContextTreeModel build_model(std::vector<ContextDistribution> entries, int alphabet_size,
                             std::string name = "custom");

// The context of `past` under `model`; throws PastTooShort.
const Context& context_lookup(const ContextTreeModel& model, std::span<const Symbol> past);

}  // namespace ctm
