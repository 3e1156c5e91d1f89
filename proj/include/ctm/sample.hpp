#pragma once

#include <span>
#include <vector>

#include "ctm/context_tree.hpp"

namespace ctm {

// Kicker choices x and goalkeeper responses y, trial t stored at index t-1.
struct PairedSample {
  std::vector<Symbol> x;
  std::vector<Symbol> y;
  int alphabet_size = kGoalkeeperAlphabet;

  std::size_t size() const noexcept { return x.size(); }

  // Throws InvalidArgument on length mismatch, BadSymbol on out-of-range.
  void validate() const;

  // Trials [begin, end) as a new sample (0-based, half-open).
  PairedSample slice(std::size_t begin, std::size_t end) const;
};

}  // namespace ctm
