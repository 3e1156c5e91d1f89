#include "ctm/sample.hpp"

#include <string>

#include "ctm/error.hpp"

namespace ctm {

void PairedSample::validate() const {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "x has " + std::to_string(x.size()) +
                                                 " symbols but y has " + std::to_string(y.size()));
  }
  if (alphabet_size < 2 || alphabet_size > kMaxAlphabet) {
    throw Error(ErrorCode::kInvalidArgument, "alphabet size must be in [2, 10]");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= alphabet_size || y[i] >= alphabet_size) {
      throw Error(ErrorCode::kBadSymbol, "trial " + std::to_string(i + 1));
    }
  }
}

PairedSample PairedSample::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) throw Error(ErrorCode::kEmptyRange, "bad slice");
  PairedSample out;
  out.alphabet_size = alphabet_size;
  out.x.assign(x.begin() + static_cast<std::ptrdiff_t>(begin), x.begin() + static_cast<std::ptrdiff_t>(end));
  out.y.assign(y.begin() + static_cast<std::ptrdiff_t>(begin), y.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

}  // namespace ctm
