#include "ctm/simulate.hpp"

#include <algorithm>

#include "ctm/error.hpp"

namespace ctm {

KickerStream::KickerStream(const ContextTreeModel& model, std::uint64_t seed, std::uint64_t stream)
    : model_(&model), rng_(seed, stream) {
  const int alphabet = model.alphabet_size();
  past_.resize(static_cast<std::size_t>(model.height()));
  for (auto& s : past_) s = static_cast<Symbol>(rng_.below(static_cast<std::uint32_t>(alphabet)));
  for (int i = 0; i < kBurnIn; ++i) step();
}

Symbol KickerStream::step() {
  const std::size_t ctx = model_->tree().lookup(past_);
  const auto sym = static_cast<Symbol>(rng_.categorical(model_->probs(ctx)));
  if (!past_.empty()) {
    std::shift_left(past_.begin(), past_.end(), 1);
    past_.back() = sym;
  }
  return sym;
}

Symbol KickerStream::next() {
  ++emitted_;
  return step();
}

std::vector<Symbol> simulate(const ContextTreeModel& model, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  KickerStream kicker(model, seed, stream);
  std::vector<Symbol> out(n);
  for (auto& s : out) s = kicker.next();
  return out;
}

}  // namespace ctm
