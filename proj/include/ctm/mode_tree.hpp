#pragma once

#include <map>
#include <span>
#include <vector>

#include "ctm/context_tree.hpp"

namespace ctm {

struct ModeTree {
  ContextTree tree;
  // f(w): fraction of input trees having w as a context, for every node of the
  // full |A|-ary tree of height L (the root included).
  std::map<Context, double> frequency;
};

// Consensus tree over estimated trees. Bottom-up on the full tree of height L:
// value(w) = f(w) at depth L, otherwise max(f(w), mean_b value(bw)); w is kept
// as a leaf iff f(w) >= that mean. Throws EmptyInput, InvalidArgument when a
// tree is deeper than L.
ModeTree mode_context_tree(std::span<const ContextTree> trees, int max_height,
                           int alphabet_size = kGoalkeeperAlphabet);

}  // namespace ctm
