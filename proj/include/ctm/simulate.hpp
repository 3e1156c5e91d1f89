#pragma once

#include <cstdint>
#include <vector>

#include "ctm/context_tree.hpp"
#include "ctm/rng.hpp"

namespace ctm {

inline constexpr int kBurnIn = 100;

// Lazily generated source sequence. The past starts as `height` uniform
// symbols, then kBurnIn steps are discarded before the first emitted symbol.
class KickerStream {
 public:
  KickerStream(const ContextTreeModel& model, std::uint64_t seed, std::uint64_t stream = 0);

  Symbol next();
  std::size_t emitted() const noexcept { return emitted_; }

 private:
  Symbol step();

  const ContextTreeModel* model_;
  Rng rng_;
  std::vector<Symbol> past_;
  std::size_t emitted_ = 0;
};

// Deterministic in (model, n, seed, stream). Throws InvalidArgument for n < 1.
std::vector<Symbol> simulate(const ContextTreeModel& model, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream = 0);

}  // namespace ctm
