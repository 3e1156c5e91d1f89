#include "ctm/mode_tree.hpp"

#include "ctm/error.hpp"

namespace ctm {
namespace {

struct Builder {
  const std::map<Context, double>& frequency;
  int max_height;
  int alphabet;
  std::vector<Context> leaves;

  double value(const Context& w) const {
    auto it = frequency.find(w);
    const double f = it == frequency.end() ? 0.0 : it->second;
    if (static_cast<int>(w.size()) == max_height) return f;
    double mean = 0.0;
    for (int b = 0; b < alphabet; ++b) mean += value(w.extended(static_cast<Symbol>(b)));
    mean /= alphabet;
    return std::max(f, mean);
  }

  void select(const Context& w) {
    auto it = frequency.find(w);
    const double f = it == frequency.end() ? 0.0 : it->second;
    if (static_cast<int>(w.size()) == max_height) {
      leaves.push_back(w);
      return;
    }
    double mean = 0.0;
    for (int b = 0; b < alphabet; ++b) mean += value(w.extended(static_cast<Symbol>(b)));
    mean /= alphabet;
    if (f >= mean) {
      leaves.push_back(w);
      return;
    }
    for (int b = 0; b < alphabet; ++b) select(w.extended(static_cast<Symbol>(b)));
  }
};

void enumerate(const Context& w, int max_height, int alphabet, std::map<Context, double>& out) {
  out.emplace(w, 0.0);
  if (static_cast<int>(w.size()) == max_height) return;
  for (int b = 0; b < alphabet; ++b) enumerate(w.extended(static_cast<Symbol>(b)), max_height, alphabet, out);
}

}  // namespace

ModeTree mode_context_tree(std::span<const ContextTree> trees, int max_height, int alphabet_size) {
  if (trees.empty()) throw Error(ErrorCode::kEmptyInput, "no trees");
  if (max_height < 0 || max_height > 8) throw Error(ErrorCode::kInvalidArgument, "L must be in [0, 8]");
  ModeTree out;
  enumerate(Context{}, max_height, alphabet_size, out.frequency);
  for (const auto& t : trees) {
    if (t.height() > max_height) {
      throw Error(ErrorCode::kInvalidArgument, "tree " + t.describe() + " is deeper than L");
    }
    for (const auto& c : t.contexts()) out.frequency[c] += 1.0;
  }
  for (auto& [w, f] : out.frequency) f /= static_cast<double>(trees.size());

  // value() recomputes subtrees; fine for the small trees this runs on
  // (|A|^L <= 3^4 nodes in practice).
  Builder b{out.frequency, max_height, alphabet_size, {}};
  b.select(Context{});
  out.tree = ContextTree::make(std::move(b.leaves), alphabet_size);
  return out;
}

}  // namespace ctm
