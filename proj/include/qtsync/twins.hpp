#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtsync/energy.hpp"
#include "qtsync/graph.hpp"

namespace qtsync {

enum class TwinKind { structural_open, structural_closed, geometric_open, geometric_closed, none };
enum class TwinCase { synchronized, antipodal, degenerate, not_applicable };

inline const char* to_string(TwinKind k) {
  switch (k) {
    case TwinKind::structural_open: return "structural_open";
    case TwinKind::structural_closed: return "structural_closed";
    case TwinKind::geometric_open: return "geometric_open";
    case TwinKind::geometric_closed: return "geometric_closed";
    case TwinKind::none: return "none";
  }
  return "?";
}

inline const char* to_string(TwinCase c) {
  switch (c) {
    case TwinCase::synchronized: return "synchronized";
    case TwinCase::antipodal: return "antipodal";
    case TwinCase::degenerate: return "degenerate";
    case TwinCase::not_applicable: return "n/a";
  }
  return "?";
}

struct TwinClassification {
  Vertex a = 0;
  Vertex b = 0;
  TwinKind kind = TwinKind::none;
  TwinCase twin_case = TwinCase::not_applicable;
  double mu_a = 0.0;
  double mu_b = 0.0;
  Vec2 q;
  // Largest violation of the defining equations at the recovered strengths.
  double residual = 0.0;
};

// Neighbourhood comparison over all pairs a < b.
inline std::vector<TwinClassification> structural_twins(const Graph& g) {
  std::vector<TwinClassification> out;
  for (Vertex a = 0; a < g.n(); ++a) {
    for (Vertex b = a + 1; b < g.n(); ++b) {
      const bool adjacent = g.has_edge(a, b);
      bool same = true;
      for (Vertex w = 0; w < g.n() && same; ++w) {
        if (w == a || w == b) continue;
        same = g.has_edge(a, w) == g.has_edge(b, w);
      }
      if (!same) continue;
      TwinClassification t;
      t.a = a;
      t.b = b;
      t.kind = adjacent ? TwinKind::structural_closed : TwinKind::structural_open;
      out.push_back(t);
    }
  }
  return out;
}

// q = mu_a v_a = mu_b v_b. Strengths are the projections <q, v>; the case is
// chosen with the degenerate point (mu_a = mu_b = 0) tested first.
inline TwinClassification classify_geometric_open(const PhaseState& s, Vertex a, Vertex b, Vec2 q, double tol) {
  TwinClassification t;
  t.a = a;
  t.b = b;
  t.q = q;
  const Vec2 va = s.phasor(a);
  const Vec2 vb = s.phasor(b);
  t.mu_a = dot(q, va);
  t.mu_b = dot(q, vb);
  t.residual = std::max(norm(q - t.mu_a * va), norm(q - t.mu_b * vb));
  if (t.residual > tol) return t;
  if (std::abs(t.mu_a) <= tol && std::abs(t.mu_b) <= tol) {
    t.kind = TwinKind::geometric_open;
    t.twin_case = TwinCase::degenerate;
  } else if (std::abs(t.mu_a - t.mu_b) <= tol && norm(va - vb) <= tol) {
    t.kind = TwinKind::geometric_open;
    t.twin_case = TwinCase::synchronized;
  } else if (std::abs(t.mu_a + t.mu_b) <= tol && norm(va + vb) <= tol) {
    t.kind = TwinKind::geometric_open;
    t.twin_case = TwinCase::antipodal;
  }
  return t;
}

// v_b + q = mu_a v_a and v_a + q = mu_b v_b. The degenerate point
// (mu_a = mu_b = -1) is tested first.
inline TwinClassification classify_geometric_closed(const PhaseState& s, Vertex a, Vertex b, Vec2 q, double tol) {
  TwinClassification t;
  t.a = a;
  t.b = b;
  t.q = q;
  const Vec2 va = s.phasor(a);
  const Vec2 vb = s.phasor(b);
  t.mu_a = dot(vb + q, va);
  t.mu_b = dot(va + q, vb);
  t.residual = std::max(norm(vb + q - t.mu_a * va), norm(va + q - t.mu_b * vb));
  if (t.residual > tol) return t;
  if (std::abs(t.mu_a + 1.0) <= tol && std::abs(t.mu_b + 1.0) <= tol && norm(va + vb + q) <= tol) {
    t.kind = TwinKind::geometric_closed;
    t.twin_case = TwinCase::degenerate;
  } else if (std::abs(t.mu_a - t.mu_b) <= tol && norm(va - vb) <= tol) {
    t.kind = TwinKind::geometric_closed;
    t.twin_case = TwinCase::synchronized;
  } else if (std::abs(t.mu_a + t.mu_b + 2.0) <= tol && std::abs(t.mu_a + 1.0) > tol && norm(va + vb) <= tol) {
    t.kind = TwinKind::geometric_closed;
    t.twin_case = TwinCase::antipodal;
  }
  return t;
}

// Common vector of a structural twin pair: the phasor sum over the shared
// neighbourhood (excluding the pair itself).
inline Vec2 common_vector(const Graph& g, const PhaseState& s, Vertex a, Vertex b) {
  Vec2 q;
  for (Vertex w : g.neighbors(a))
    if (w != b) q += s.phasor(w);
  return q;
}

// Geometric classification of every structural twin pair at state s.
inline std::vector<TwinClassification> geometric_twins_at(const Graph& g, const PhaseState& s, double tol) {
  detail::check_length(g, s);
  std::vector<TwinClassification> out;
  for (const auto& st : structural_twins(g)) {
    const Vec2 q = common_vector(g, s, st.a, st.b);
    out.push_back(st.kind == TwinKind::structural_closed ? classify_geometric_closed(s, st.a, st.b, q, tol)
                                                         : classify_geometric_open(s, st.a, st.b, q, tol));
  }
  return out;
}

// Node i sits at a stable node equilibrium: sum over N(i) equals mu_i v_i
// with mu_i >= 0.
inline bool node_stable(const Graph& g, const PhaseState& s, Vertex i, double tol) {
  Vec2 sum;
  for (Vertex j : g.neighbors(i)) sum += s.phasor(j);
  const Vec2 v = s.phasor(i);
  const double mu = dot(sum, v);
  return mu >= -tol && norm(sum - mu * v) <= tol;
}

enum class BenignOutcome { applies_and_syncs, hypotheses_fail, conclusion_fails };

inline const char* to_string(BenignOutcome o) {
  switch (o) {
    case BenignOutcome::applies_and_syncs: return "applies_and_syncs";
    case BenignOutcome::hypotheses_fail: return "hypotheses_fail";
    case BenignOutcome::conclusion_fails: return "conclusion_fails";
  }
  return "?";
}

struct BenignReport {
  BenignOutcome outcome = BenignOutcome::hypotheses_fail;
  std::string reason;
  std::vector<Vertex> shared;  // S
  std::vector<Vertex> extra;   // T
  double mu_a = 0.0;
  double mu_b = 0.0;           // strength of b with T absorbed (mu_b + |T|)
  TwinClassification closed;
};

// Adjacent nodes a, b with N(b)\{a} = S and N(a)\{b} = S + T. If both are at
// stable node equilibrium and every T-phasor equals v_b, then a and b form
// geometric closed twins with non-negative strengths w.r.t. S + T and must
// coincide. Each hypothesis is checked numerically.
inline BenignReport check_benign_extra(const Graph& g, const PhaseState& s, Vertex a, Vertex b,
                                       const Tolerances& tols = {}) {
  detail::check_length(g, s);
  BenignReport r;
  auto fail = [&](std::string why) {
    r.outcome = BenignOutcome::hypotheses_fail;
    r.reason = std::move(why);
    return r;
  };
  if (a >= g.n() || b >= g.n() || a == b) return fail("invalid node pair");
  if (!g.has_edge(a, b)) return fail("a and b are not adjacent");
  for (Vertex w : g.neighbors(b)) {
    if (w == a) continue;
    if (!g.has_edge(a, w)) return fail("N(b) is not contained in N(a): node " + std::to_string(w));
    r.shared.push_back(w);
  }
  for (Vertex w : g.neighbors(a)) {
    if (w != b && !g.has_edge(b, w)) r.extra.push_back(w);
  }
  if (!node_stable(g, s, a, tols.zero)) return fail("a is not at a stable node equilibrium");
  if (!node_stable(g, s, b, tols.zero)) return fail("b is not at a stable node equilibrium");
  for (Vertex w : r.extra) {
    if (circular_distance(s.theta[w], s.theta[b]) > tols.sync) {
      return fail("T not aligned: node " + std::to_string(w) + " differs from b");
    }
  }
  Vec2 q;
  for (Vertex w : r.shared) q += s.phasor(w);
  for (Vertex w : r.extra) q += s.phasor(w);
  r.closed = classify_geometric_closed(s, a, b, q, tols.zero);
  r.mu_a = r.closed.mu_a;
  r.mu_b = r.closed.mu_b;
  if (circular_distance(s.theta[a], s.theta[b]) <= tols.sync) {
    r.outcome = BenignOutcome::applies_and_syncs;
  } else {
    r.outcome = BenignOutcome::conclusion_fails;
    r.reason = "hypotheses hold but a and b are not synchronized";
  }
  return r;
}

// x^T H x for the indicator x of U, i.e. the sum of cos(theta_i - theta_j)
// over edges leaving U. A negative value shows H is not PSD.
inline double cut_energy(const Graph& g, const PhaseState& s, const std::vector<Vertex>& U) {
  detail::check_length(g, s);
  if (U.empty() || U.size() >= g.n()) throw std::invalid_argument("cut_energy needs a nonempty proper subset");
  std::vector<char> in(g.n(), 0);
  for (Vertex u : U) {
    if (u >= g.n()) throw std::invalid_argument("cut_energy: node out of range");
    in[u] = 1;
  }
  double acc = 0.0;
  for (auto [i, j] : g.edges())
    if (in[i] != in[j]) acc += std::cos(s.theta[i] - s.theta[j]);
  return acc;
}

enum class ExtensionOutcome { aligned, zero_sum, violation_witness, not_parallel };

inline const char* to_string(ExtensionOutcome o) {
  switch (o) {
    case ExtensionOutcome::aligned: return "aligned";
    case ExtensionOutcome::zero_sum: return "zero_sum";
    case ExtensionOutcome::violation_witness: return "violation_witness";
    case ExtensionOutcome::not_parallel: return "not_parallel";
  }
  return "?";
}

struct ExtensionReport {
  ExtensionOutcome outcome = ExtensionOutcome::aligned;
  Vec2 p_sum;             // sum of P-phasors
  Vec2 common;            // unit phasor shared by Q
  double inner = 0.0;     // <p_sum, common>
  double cross = 0.0;     // |p_sum x common| / |p_sum|
  std::vector<double> witness;   // indicator of Q, set for violation_witness
  double witness_value = 0.0;    // |Q| <p_sum, common>
};

// Q synchronized at phasor v, every Q node adjacent to all of P and to
// nothing outside P + Q. Then sum_P v_i is zero or positively aligned with
// v; otherwise the indicator of Q is a negative-curvature direction.
inline ExtensionReport check_homogeneous_extension(const Graph& g, const PhaseState& s,
                                                   const std::vector<Vertex>& Q, const std::vector<Vertex>& P,
                                                   const Tolerances& tols = {}) {
  detail::check_length(g, s);
  if (Q.empty()) throw std::invalid_argument("homogeneous extension: Q is empty");
  std::vector<char> inQ(g.n(), 0), inP(g.n(), 0);
  for (Vertex v : Q) {
    if (v >= g.n()) throw std::invalid_argument("homogeneous extension: node out of range");
    inQ[v] = 1;
  }
  for (Vertex v : P) {
    if (v >= g.n()) throw std::invalid_argument("homogeneous extension: node out of range");
    if (inQ[v]) throw std::invalid_argument("homogeneous extension: P and Q share node " + std::to_string(v));
    inP[v] = 1;
  }
  for (Vertex i : Q) {
    for (Vertex p : P) {
      if (!g.has_edge(i, p)) {
        throw std::invalid_argument("homogeneous extension: node " + std::to_string(i) +
                                    " in Q is not adjacent to node " + std::to_string(p) + " in P");
      }
    }
    for (Vertex w : g.neighbors(i)) {
      if (!inP[w] && !inQ[w]) {
        throw std::invalid_argument("homogeneous extension: node " + std::to_string(i) +
                                    " in Q has neighbour " + std::to_string(w) + " outside P and Q");
      }
    }
  }
  Vec2 qsum;
  for (Vertex i : Q) qsum += s.phasor(i);
  const double dir = std::atan2(qsum.y, qsum.x);
  for (Vertex i : Q) {
    if (circular_distance(s.theta[i], dir) > tols.sync) {
      throw std::invalid_argument("homogeneous extension: Q is not synchronized at node " + std::to_string(i));
    }
  }
  ExtensionReport r;
  r.common = unit(dir);
  r.p_sum = phasor_sum(s, P);
  r.inner = dot(r.p_sum, r.common);
  const double len = norm(r.p_sum);
  r.cross = len > 0.0 ? std::abs(cross(r.p_sum, r.common)) / len : 0.0;
  r.witness_value = static_cast<double>(Q.size()) * r.inner;
  if (len <= tols.zero) {
    r.outcome = ExtensionOutcome::zero_sum;
  } else if (r.inner > 0.0 && r.cross <= tols.sync) {
    r.outcome = ExtensionOutcome::aligned;
  } else if (r.inner < 0.0) {
    r.outcome = ExtensionOutcome::violation_witness;
    r.witness.assign(g.n(), 0.0);
    for (Vertex i : Q) r.witness[i] = 1.0;
  } else {
    r.outcome = ExtensionOutcome::not_parallel;
  }
  return r;
}

}  // namespace qtsync
