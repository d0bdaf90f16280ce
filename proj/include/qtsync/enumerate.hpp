#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtsync/forest.hpp"

namespace qtsync {

// Canonical bracket encoding of the subtree at v: "(" + children's codes
// sorted in descending order + ")". Two rooted trees are isomorphic iff the
// codes of their roots agree.
inline std::string canonical_code(const RootedForest& f, Vertex v) {
  std::vector<std::string> parts;
  for (Vertex c : f.children(v)) parts.push_back(canonical_code(f, c));
  std::sort(parts.begin(), parts.end(), std::greater<>());
  std::string out = "(";
  for (auto& p : parts) out += p;
  out += ")";
  return out;
}

// Preorder parent array of a bracket code; node 0 is the root.
inline RootedForest forest_from_code(const std::string& code) {
  std::vector<RootedForest::Parent> parent;
  std::vector<Vertex> stack;
  for (char ch : code) {
    if (ch == '(') {
      parent.push_back(stack.empty() ? RootedForest::Parent{} : RootedForest::Parent{stack.back()});
      stack.push_back(parent.size() - 1);
    } else if (ch == ')') {
      if (stack.empty()) throw std::invalid_argument("unbalanced tree code");
      stack.pop_back();
    } else {
      throw std::invalid_argument("tree code may only contain brackets");
    }
  }
  if (!stack.empty()) throw std::invalid_argument("unbalanced tree code");
  return RootedForest(std::move(parent));
}

namespace detail {

class RootedTreeGenerator {
 public:
  explicit RootedTreeGenerator(std::size_t max_n) : by_size_(max_n + 1) {
    if (max_n >= 1) by_size_[1] = {"()"};
    for (std::size_t n = 2; n <= max_n; ++n) {
      std::vector<std::string> acc;
      std::vector<std::string> chosen;
      forests(n - 1, n - 1, 0, chosen, acc);
      std::sort(acc.begin(), acc.end(), std::greater<>());
      by_size_[n] = std::move(acc);
    }
  }

  const std::vector<std::string>& trees(std::size_t n) const { return by_size_.at(n); }

 private:
  // Emits every forest of total size `remaining` whose trees are listed in
  // non-increasing (size, index) order, capped by (max_size, min_index).
  void forests(std::size_t remaining, std::size_t max_size, std::size_t min_index,
               std::vector<std::string>& chosen, std::vector<std::string>& out) {
    if (remaining == 0) {
      std::vector<std::string> parts = chosen;
      std::sort(parts.begin(), parts.end(), std::greater<>());
      std::string code = "(";
      for (auto& p : parts) code += p;
      out.push_back(code + ")");
      return;
    }
    for (std::size_t s = std::min(remaining, max_size); s >= 1; --s) {
      const auto& pool = by_size_[s];
      const std::size_t start = (s == max_size) ? min_index : 0;
      for (std::size_t i = start; i < pool.size(); ++i) {
        chosen.push_back(pool[i]);
        forests(remaining - s, s, i, chosen, out);
        chosen.pop_back();
      }
    }
  }

  std::vector<std::vector<std::string>> by_size_;
};

}  // namespace detail

// All non-isomorphic rooted trees on exactly n nodes, as preorder parent
// arrays, in a fixed deterministic order.
inline std::vector<RootedForest> enumerate_rooted_trees(std::size_t n) {
  if (n == 0) return {};
  detail::RootedTreeGenerator gen(n);
  std::vector<RootedForest> out;
  for (const auto& code : gen.trees(n)) out.push_back(forest_from_code(code));
  return out;
}

// Trees on 1..max_n nodes, grouped by size ascending.
inline std::vector<RootedForest> enumerate_rooted_trees_up_to(std::size_t max_n) {
  std::vector<RootedForest> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto batch = enumerate_rooted_trees(n);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  return out;
}

}  // namespace qtsync
