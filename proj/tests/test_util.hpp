#pragma once

#include <string>
#include <vector>

#include "ctm/context_tree.hpp"
#include "ctm/sample.hpp"

namespace ctm::test {

inline std::vector<Symbol> symbols(const std::string& digits) {
  std::vector<Symbol> out;
  for (char c : digits) out.push_back(static_cast<Symbol>(c - '0'));
  return out;
}

inline PairedSample paired(const std::string& x, const std::string& y, int alphabet = kGoalkeeperAlphabet) {
  PairedSample s;
  s.x = symbols(x);
  s.y = symbols(y);
  s.alphabet_size = alphabet;
  return s;
}

inline ContextTree tree_of(std::initializer_list<const char*> contexts, int alphabet = kGoalkeeperAlphabet,
                           Completeness completeness = Completeness::kRequireComplete) {
  std::vector<Context> list;
  for (const char* c : contexts) list.push_back(Context::parse(c));
  return ContextTree::make(std::move(list), alphabet, completeness);
}

}  // namespace ctm::test
