#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtsync/energy.hpp"
#include "qtsync/forest.hpp"
#include "qtsync/landscape.hpp"
#include "qtsync/twins.hpp"

namespace qtsync {

// Every descendant of v shares v's angle (within tol, circular distance).
inline bool is_leaf_like(const RootedForest& f, const PhaseState& s, Vertex v, double tol) {
  for (Vertex d : f.descendants(v))
    if (circular_distance(s.theta[d], s.theta[v]) > tol) return false;
  return true;
}

enum class NodeVerdict { leaf, leaf_like, failed };

inline const char* to_string(NodeVerdict v) {
  switch (v) {
    case NodeVerdict::leaf: return "leaf";
    case NodeVerdict::leaf_like: return "leaf_like";
    case NodeVerdict::failed: return "FAILED";
  }
  return "?";
}

struct ChildAlignment {
  Vertex child = 0;
  ExtensionOutcome outcome = ExtensionOutcome::aligned;
  double inner = 0.0;
  double cross = 0.0;
  double witness_value = 0.0;
};

struct ChildSync {
  Vertex child = 0;
  BenignOutcome outcome = BenignOutcome::hypotheses_fail;
  double mu_parent = 0.0;
  double mu_child = 0.0;
  std::string reason;
};

struct NodeEvidence {
  Vertex node = 0;
  std::size_t depth = 0;
  NodeVerdict verdict = NodeVerdict::failed;
  double mu = 0.0;
  Vec2 anchor;                  // v_A plus the phasors of all ancestors
  double anchor_norm = 0.0;
  std::optional<double> exclusion_witness;  // cut energy of {A} + Desc(A) when the anchor vanishes
  std::vector<ChildAlignment> alignments;   // step 1
  std::vector<TwinClassification> sibling_twins;  // step 2, each child against the first
  std::vector<ChildSync> parent_child;      // step 3
  std::string reason;
};

struct CertificateLayer {
  std::size_t depth = 0;
  std::vector<NodeEvidence> nodes;
};

struct SyncCertificate {
  RootedForest tree;
  PhaseState state;
  std::vector<CertificateLayer> layers;  // strictly decreasing depth
  bool certified = false;
  std::optional<Vertex> failed_node;
  std::string failure_reason;
  double deviation = 0.0;  // aligned_deviation(state), checked independently
};

struct CertifyOptions {
  Tolerances tols;
  bool require_closure = true;
  bool require_sosp = true;
};

namespace detail {

inline std::vector<Vertex> with_node(Vertex v, std::vector<Vertex> rest) {
  rest.insert(rest.begin(), v);
  return rest;
}

inline NodeEvidence certify_node(const Graph& g, const RootedForest& f, const PhaseState& s, Vertex a,
                                 const std::vector<NodeVerdict>& verdict, const Tolerances& tols) {
  NodeEvidence ev;
  ev.node = a;
  ev.depth = f.depth(a);
  {
    Vec2 sum;
    for (Vertex j : g.neighbors(a)) sum += s.phasor(j);
    ev.mu = dot(sum, s.phasor(a));
  }
  auto failed = [&](std::string why) {
    ev.verdict = NodeVerdict::failed;
    ev.reason = std::move(why);
    return ev;
  };
  if (f.is_leaf(a)) {
    ev.verdict = NodeVerdict::leaf;
    return ev;
  }
  for (Vertex c : f.children(a)) {
    if (verdict[c] == NodeVerdict::failed) return failed("child " + std::to_string(c) + " is not leaf or leaf-like");
  }

  // Step 1: every child subtree lines up with v_A + sum over Anc(A).
  const std::vector<Vertex> anc = f.ancestors(a);
  const std::vector<Vertex> upper = with_node(a, anc);
  ev.anchor = phasor_sum(s, upper);
  ev.anchor_norm = norm(ev.anchor);
  if (ev.anchor_norm <= tols.zero) {
    const auto U = with_node(a, f.descendants(a));
    if (U.size() < g.n()) ev.exclusion_witness = cut_energy(g, s, U);
    return failed("phasor sum over A and its ancestors vanishes; moving A with its descendants lowers the energy");
  }
  for (Vertex c : f.children(a)) {
    ChildAlignment al;
    al.child = c;
    try {
      const auto rep = check_homogeneous_extension(g, s, with_node(c, f.descendants(c)), upper, tols);
      al.outcome = rep.outcome;
      al.inner = rep.inner;
      al.cross = rep.cross;
      al.witness_value = rep.witness_value;
    } catch (const std::invalid_argument& e) {
      ev.alignments.push_back(al);
      return failed(std::string("step 1 hypotheses fail: ") + e.what());
    }
    ev.alignments.push_back(al);
    if (al.outcome != ExtensionOutcome::aligned) {
      return failed("step 1: subtree of child " + std::to_string(c) + " is " + to_string(al.outcome));
    }
  }

  // Step 2: children are geometric open twins w.r.t. the anchor, all in the
  // synchronized case.
  const auto& kids = f.children(a);
  const double twin_tol = tols.sync * (1.0 + ev.anchor_norm);
  for (std::size_t k = 1; k < kids.size(); ++k) {
    auto t = classify_geometric_open(s, kids.front(), kids[k], ev.anchor, twin_tol);
    ev.sibling_twins.push_back(t);
    if (t.kind != TwinKind::geometric_open || t.twin_case != TwinCase::synchronized) {
      return failed("step 2: children " + std::to_string(kids.front()) + " and " + std::to_string(kids[k]) +
                    " are not synchronized open twins");
    }
  }

  // Step 3: A against each child, remaining siblings act as benign extras.
  for (Vertex p : kids) {
    const auto br = check_benign_extra(g, s, a, p, tols);
    ev.parent_child.push_back({p, br.outcome, br.mu_a, br.mu_b, br.reason});
    if (br.outcome != BenignOutcome::applies_and_syncs) {
      return failed("step 3: node and child " + std::to_string(p) + ": " + br.reason);
    }
  }

  if (!is_leaf_like(f, s, a, tols.sync)) return failed("steps passed but a descendant is not synchronized with the node");
  ev.verdict = NodeVerdict::leaf_like;
  return ev;
}

}  // namespace detail

// Layer-by-layer leaf-like propagation from the deepest level to the roots.
// Throws std::invalid_argument when the tree does not represent g or the
// state is not a second-order stationary point (unless disabled in opts).
inline SyncCertificate certify(const Graph& g, const RootedForest& f, const PhaseState& s,
                               const CertifyOptions& opts = {}) {
  detail::check_length(g, s);
  if (f.size() != g.n()) throw std::invalid_argument("certify: tree and graph sizes differ");
  if (opts.require_closure && !(comparability_closure(f) == g)) {
    throw std::invalid_argument("certify: closure mismatch, the tree does not represent the graph");
  }
  if (opts.require_sosp) {
    const auto rep = classify(g, s, opts.tols);
    if (!is_sosp(rep.verdict)) {
      throw std::invalid_argument(std::string("certify: state is not a second-order stationary point (") +
                                  to_string(rep.verdict) + ")");
    }
  }

  SyncCertificate cert;
  cert.tree = f;
  cert.state = s;
  cert.deviation = aligned_deviation(s);
  std::vector<NodeVerdict> verdict(g.n(), NodeVerdict::failed);
  for (std::size_t d = f.height() + 1; d-- > 0;) {
    CertificateLayer layer;
    layer.depth = d;
    for (Vertex a : f.nodes_at_depth(d)) {
      NodeEvidence ev = detail::certify_node(g, f, s, a, verdict, opts.tols);
      verdict[a] = ev.verdict;
      if (ev.verdict == NodeVerdict::failed && !cert.failed_node) {
        cert.failed_node = a;
        cert.failure_reason = ev.reason;
      }
      layer.nodes.push_back(std::move(ev));
    }
    cert.layers.push_back(std::move(layer));
  }
  if (!cert.failed_node) {
    cert.certified = true;
    if (cert.deviation > opts.tols.sync) {
      cert.certified = false;
      cert.failed_node = f.roots().front();
      cert.failure_reason = "roots are leaf-like but the state is not globally synchronized";
    }
  }
  return cert;
}

}  // namespace qtsync
