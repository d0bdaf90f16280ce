#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qtsync/graph.hpp"

namespace qtsync {

// Rooted forest stored as a parent array; std::nullopt marks a root.
class RootedForest {
 public:
  using Parent = std::optional<Vertex>;

  RootedForest() = default;

  // Validates indices and acyclicity, then builds children lists.
  explicit RootedForest(std::vector<Parent> parent) : parent_(std::move(parent)) {
    const std::size_t n = parent_.size();
    children_.assign(n, {});
    for (Vertex v = 0; v < n; ++v) {
      if (!parent_[v]) continue;
      const Vertex p = *parent_[v];
      if (p >= n) {
        throw std::invalid_argument("parent of node " + std::to_string(v) + " is out of range");
      }
      if (p == v) throw std::invalid_argument("node " + std::to_string(v) + " is its own parent");
      children_[p].push_back(v);
    }
    depth_.assign(n, kUnset);
    for (Vertex v = 0; v < n; ++v) resolve_depth(v);
  }

  std::size_t size() const { return parent_.size(); }
  const std::vector<Parent>& parents() const { return parent_; }
  Parent parent(Vertex v) const { return parent_.at(v); }
  bool is_root(Vertex v) const { return !parent_.at(v).has_value(); }
  bool is_leaf(Vertex v) const { return children_.at(v).empty(); }
  const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
  std::size_t depth(Vertex v) const { return depth_.at(v); }

  std::size_t height() const {
    std::size_t h = 0;
    for (auto d : depth_) h = std::max(h, d);
    return h;
  }

  std::vector<Vertex> roots() const {
    std::vector<Vertex> r;
    for (Vertex v = 0; v < size(); ++v)
      if (is_root(v)) r.push_back(v);
    return r;
  }

  // Nearest first.
  std::vector<Vertex> ancestors(Vertex v) const {
    std::vector<Vertex> out;
    for (Parent p = parent_.at(v); p; p = parent_[*p]) out.push_back(*p);
    return out;
  }

  // Sorted ascending.
  std::vector<Vertex> descendants(Vertex v) const {
    std::vector<Vertex> out;
    std::vector<Vertex> stack(children_.at(v).begin(), children_.at(v).end());
    while (!stack.empty()) {
      const Vertex w = stack.back();
      stack.pop_back();
      out.push_back(w);
      stack.insert(stack.end(), children_[w].begin(), children_[w].end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Vertex> nodes_at_depth(std::size_t d) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < size(); ++v)
      if (depth_[v] == d) out.push_back(v);
    return out;
  }

  bool operator==(const RootedForest& o) const { return parent_ == o.parent_; }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  static constexpr std::size_t kVisiting = static_cast<std::size_t>(-2);

  std::size_t resolve_depth(Vertex v) {
    if (depth_[v] == kVisiting) {
      throw std::invalid_argument("parent array contains a cycle through node " + std::to_string(v));
    }
    if (depth_[v] != kUnset) return depth_[v];
    if (!parent_[v]) return depth_[v] = 0;
    depth_[v] = kVisiting;
    return depth_[v] = resolve_depth(*parent_[v]) + 1;
  }

  std::vector<Parent> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::size_t> depth_;
};

// u ~ v iff one is a proper ancestor of the other.
inline Graph comparability_closure(const RootedForest& f) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < f.size(); ++v)
    for (Vertex a : f.ancestors(v)) e.emplace_back(a, v);
  return Graph::from_edges(f.size(), e);
}

// Every vertex hangs off the nearest later '1'-vertex; the last '1' is the
// root. Vertex numbering follows threshold_from_sequence.
inline RootedForest caterpillar_from_sequence(std::string_view bits) {
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != '0' && bits[k] != '1') {
      throw std::invalid_argument("caterpillar sequence has non-binary character at position " +
                                  std::to_string(k));
    }
  }
  if (!bits.empty() && bits.back() != '1') {
    throw std::invalid_argument(
        "caterpillar sequence must end in '1': trailing '0' vertices have no later universal "
        "vertex to attach to (the threshold graph is disconnected)");
  }
  const std::size_t n = bits.size() + 1;
  std::vector<RootedForest::Parent> parent(n);
  RootedForest::Parent next_universal;
  for (std::size_t v = n; v-- > 0;) {
    parent[v] = next_universal;
    if (v >= 1 && bits[v - 1] == '1') next_universal = v;
  }
  return RootedForest(std::move(parent));
}

namespace detail {

inline void represent_component(const Graph& g, std::vector<Vertex> comp,
                                RootedForest::Parent attach_to,
                                std::vector<RootedForest::Parent>& parent) {
  std::vector<Vertex> universal;
  std::vector<Vertex> rest;
  for (Vertex v : comp) {
    std::size_t inside = 0;
    for (Vertex w : g.neighbors(v))
      if (std::binary_search(comp.begin(), comp.end(), w)) ++inside;
    (inside + 1 == comp.size() ? universal : rest).push_back(v);
  }
  if (universal.empty()) {
    throw std::invalid_argument("graph is not quasi-threshold: connected vertex set starting at " +
                                std::to_string(comp.front()) + " has no universal vertex");
  }
  for (Vertex u : universal) {
    parent[u] = attach_to;
    attach_to = u;
  }
  if (rest.empty()) return;
  const Graph sub = induced_subgraph(g, rest);
  for (const auto& local : connected_components(sub)) {
    std::vector<Vertex> next;
    next.reserve(local.size());
    for (Vertex i : local) next.push_back(rest[i]);
    represent_component(g, std::move(next), attach_to, parent);
  }
}

}  // namespace detail

// Recovers a forest whose comparability closure is g. Universal vertices of
// each connected piece form a chain in ascending index order.
inline RootedForest tree_representation(const Graph& g) {
  std::vector<RootedForest::Parent> parent(g.n());
  for (auto& comp : connected_components(g)) detail::represent_component(g, comp, std::nullopt, parent);
  RootedForest f(std::move(parent));
  if (!(comparability_closure(f) == g)) {
    throw std::invalid_argument("graph is not quasi-threshold: recovered tree does not reproduce it");
  }
  return f;
}

}  // namespace qtsync
