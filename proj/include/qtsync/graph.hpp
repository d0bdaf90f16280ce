#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qtsync {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

// Undirected simple graph on vertices 0..n-1. Adjacency is held twice: as
// bitset rows for O(1) queries and as sorted neighbour lists for iteration.
// Immutable once built.
class Graph {
 public:
  Graph() = default;

  // Accepts pairs in either orientation; duplicates are merged.
  static Graph from_edges(std::size_t n, const std::vector<Edge>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) {
        throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") has an index out of range for n=" + std::to_string(n));
      }
      if (u == v) {
        throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
      }
      g.set(u, v);
    }
    g.finalize();
    return g;
  }

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

  bool has_edge(Vertex u, Vertex v) const {
    return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U;
  }

  bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

 private:
  explicit Graph(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

  void set(Vertex u, Vertex v) {
    bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    bits_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
  }

  void finalize() {
    adj_.assign(n_, {});
    edges_.clear();
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v = 0; v < n_; ++v) {
        if (has_edge(u, v)) {
          adj_[u].push_back(v);
          if (u < v) edges_.emplace_back(u, v);
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<Edge> edges_;
};

inline Graph from_edge_list(std::size_t n, const std::vector<Edge>& edges) {
  return Graph::from_edges(n, edges);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

// Vertex 0 is the initial vertex, vertex k is inserted for bit k-1: a '1'
// joins every earlier vertex, a '0' joins nothing.
inline Graph threshold_from_sequence(std::string_view bits) {
  std::vector<Edge> e;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    const char c = bits[k];
    if (c != '0' && c != '1') {
      throw std::invalid_argument(std::string("threshold sequence has non-binary character '") + c +
                                  "' at position " + std::to_string(k));
    }
    if (c == '1') {
      for (Vertex u = 0; u <= k; ++u) e.emplace_back(u, k + 1);
    }
  }
  return Graph::from_edges(bits.size() + 1, e);
}

// Clique on 0..clique_size-1, independent set after it, every cross edge.
inline Graph complete_split(std::size_t clique_size, std::size_t independent_size) {
  if (clique_size == 0) throw std::invalid_argument("complete split graph needs clique_size >= 1");
  const std::size_t n = clique_size + independent_size;
  std::vector<Edge> e;
  for (Vertex i = 0; i < clique_size; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) throw std::invalid_argument("complete bipartite graph needs both sides >= 1");
  std::vector<Edge> e;
  for (Vertex i = 0; i < a; ++i)
    for (Vertex j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return Graph::from_edges(a + b, e);
}

inline Graph add_universal_vertex(const Graph& g) {
  std::vector<Edge> e = g.edges();
  for (Vertex u = 0; u < g.n(); ++u) e.emplace_back(u, g.n());
  return Graph::from_edges(g.n() + 1, e);
}

inline Graph disjoint_union(const Graph& g1, const Graph& g2) {
  std::vector<Edge> e = g1.edges();
  for (auto [u, v] : g2.edges()) e.emplace_back(u + g1.n(), v + g1.n());
  return Graph::from_edges(g1.n() + g2.n(), e);
}

// Induced subgraph on `keep` (relabelled in the given order).
inline Graph induced_subgraph(const Graph& g, const std::vector<Vertex>& keep) {
  std::vector<Edge> e;
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = a + 1; b < keep.size(); ++b)
      if (g.has_edge(keep[a], keep[b])) e.emplace_back(a, b);
  return Graph::from_edges(keep.size(), e);
}

// Connected components, each sorted, ordered by smallest member.
inline std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  std::vector<int> seen(g.n(), 0);
  std::vector<std::vector<Vertex>> comps;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (Vertex w : g.neighbors(comp[head])) {
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

// True iff the four vertices induce P4 or C4. Both have exactly 3 or 4
// edges with every degree in {1,2}; the paw and the star are excluded by
// the degree pattern.
inline bool induces_p4_or_c4(const Graph& g, Vertex a, Vertex b, Vertex c, Vertex d) {
  const Vertex q[4] = {a, b, c, d};
  int deg[4] = {0, 0, 0, 0};
  int m = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (g.has_edge(q[i], q[j])) {
        ++deg[i];
        ++deg[j];
        ++m;
      }
  if (m != 3 && m != 4) return false;
  for (int x : deg)
    if (x < 1 || x > 2) return false;
  return true;
}

// Exhaustive scan of all 4-subsets for an induced P4 or C4.
inline bool is_quasi_threshold(const Graph& g) {
  const std::size_t n = g.n();
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c)
        for (Vertex d = c + 1; d < n; ++d)
          if (induces_p4_or_c4(g, a, b, c, d)) return false;
  return true;
}

inline constexpr std::size_t kTriviallyPerfectMaxN = 12;

namespace detail {

// Per-mask tables over all vertex subsets of a graph with n <= 12.
struct SubsetTables {
  std::vector<std::uint8_t> clique;
  std::vector<std::uint8_t> independent;
  std::vector<std::uint8_t> alpha;
};

inline SubsetTables subset_tables(const Graph& g) {
  const std::size_t n = g.n();
  const std::size_t full = std::size_t{1} << n;
  std::vector<std::uint32_t> nb(n, 0);
  for (auto [u, v] : g.edges()) {
    nb[u] |= 1U << v;
    nb[v] |= 1U << u;
  }
  SubsetTables t{std::vector<std::uint8_t>(full, 1), std::vector<std::uint8_t>(full, 1),
                 std::vector<std::uint8_t>(full, 0)};
  for (std::size_t mask = 1; mask < full; ++mask) {
    const unsigned low = static_cast<unsigned>(std::countr_zero(mask));
    const std::size_t rest = mask & (mask - 1);
    t.clique[mask] = t.clique[rest] && ((nb[low] & rest) == rest);
    t.independent[mask] = t.independent[rest] && ((nb[low] & rest) == 0);
    // alpha(mask) = max(alpha without low, 1 + alpha of rest minus N(low))
    const std::uint8_t skip = t.alpha[rest];
    const std::uint8_t take = static_cast<std::uint8_t>(1 + t.alpha[rest & ~static_cast<std::size_t>(nb[low])]);
    t.alpha[mask] = std::max(skip, take);
  }
  return t;
}

}  // namespace detail

// Brute-force trivially-perfect test: every induced subgraph H has
// independence number equal to its number of maximal cliques. Exponential,
// limited to n <= 12.
inline bool trivially_perfect_check(const Graph& g) {
  const std::size_t n = g.n();
  if (n > kTriviallyPerfectMaxN) {
    throw std::invalid_argument("trivially_perfect_check is limited to n <= " +
                                std::to_string(kTriviallyPerfectMaxN) + " (got n=" +
                                std::to_string(n) + ")");
  }
  const auto t = detail::subset_tables(g);
  const std::size_t full = std::size_t{1} << n;
  std::vector<std::uint32_t> nb(n, 0);
  for (auto [u, v] : g.edges()) {
    nb[u] |= 1U << v;
    nb[v] |= 1U << u;
  }
  for (std::size_t h = 1; h < full; ++h) {
    // Maximal cliques of G[h]: cliques C inside h that no vertex of h\C extends.
    std::size_t maximal = 0;
    for (std::size_t c = h; c != 0; c = (c - 1) & h) {
      if (!t.clique[c]) continue;
      bool extendable = false;
      for (std::size_t r = h & ~c; r != 0; r &= r - 1) {
        const unsigned w = static_cast<unsigned>(std::countr_zero(r));
        if ((nb[w] & c) == c) {
          extendable = true;
          break;
        }
      }
      if (!extendable) ++maximal;
    }
    if (maximal != t.alpha[h]) return false;
  }
  return true;
}

// Independence and clique numbers by subset enumeration (n <= 12).
inline std::size_t independence_number(const Graph& g) {
  if (g.n() > kTriviallyPerfectMaxN) throw std::invalid_argument("independence_number limited to n <= 12");
  return detail::subset_tables(g).alpha[(std::size_t{1} << g.n()) - 1];
}

inline std::size_t clique_number(const Graph& g) {
  if (g.n() > kTriviallyPerfectMaxN) throw std::invalid_argument("clique_number limited to n <= 12");
  const auto t = detail::subset_tables(g);
  std::size_t best = 0;
  for (std::size_t m = 0; m < t.clique.size(); ++m)
    if (t.clique[m]) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(m)));
  return best;
}

}  // namespace qtsync
