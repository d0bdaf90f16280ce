#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qtsync/certifier.hpp"
#include "qtsync/dynamics.hpp"
#include "qtsync/landscape.hpp"
#include "qtsync/twins.hpp"

// JSON and CSV interchange. Field names here are the stable file formats
// consumed by the command-line tool:
//   graph       {"n": int, "edges": [[i, j], ...]}      i < j, sorted
//   forest      {"parent": [null | int, ...]}
//   state       {"theta": [real, ...]}                  radians
//   survey      see survey_to_json
//   certificate see certificate_to_json
namespace qtsync::io {

using json = nlohmann::json;

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (auto [i, j] : g.edges()) edges.push_back({i, j});
  return {{"n", g.n()}, {"edges", edges}};
}

// Accepts a bare graph object or an object with a "graph" member.
inline Graph graph_from_json(const json& j) {
  const json& o = j.contains("graph") ? j.at("graph") : j;
  if (!o.contains("n") || !o.contains("edges")) throw std::invalid_argument("graph JSON needs \"n\" and \"edges\"");
  const auto n = o.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : o.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("graph JSON edge must be a pair");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return Graph::from_edges(n, edges);
}

inline json to_json(const RootedForest& f) {
  json parent = json::array();
  for (const auto& p : f.parents()) parent.push_back(p ? json(*p) : json(nullptr));
  return {{"parent", parent}};
}

// Accepts a bare forest object or an object with a "forest" member.
inline RootedForest forest_from_json(const json& j) {
  const json& o = j.contains("forest") ? j.at("forest") : j;
  if (!o.contains("parent")) throw std::invalid_argument("forest JSON needs \"parent\"");
  std::vector<RootedForest::Parent> parent;
  for (const auto& p : o.at("parent")) {
    if (p.is_null()) {
      parent.emplace_back();
    } else {
      parent.emplace_back(p.get<std::size_t>());
    }
  }
  return RootedForest(std::move(parent));
}

inline json to_json(const PhaseState& s) { return {{"theta", s.theta}}; }

inline PhaseState state_from_json(const json& j) {
  const json& o = j.contains("state") ? j.at("state") : j;
  if (!o.contains("theta")) throw std::invalid_argument("state JSON needs \"theta\"");
  PhaseState s(o.at("theta").get<std::vector<double>>());
  for (double t : s.theta)
    if (!std::isfinite(t)) throw std::invalid_argument("state JSON contains a non-finite angle");
  return s;
}

inline json to_json(Vec2 v) { return json::array({v.x, v.y}); }

inline json to_json(const TwinClassification& t) {
  json o = {{"a", t.a}, {"b", t.b}, {"kind", to_string(t.kind)}, {"case", to_string(t.twin_case)}};
  if (t.kind != TwinKind::structural_open && t.kind != TwinKind::structural_closed) {
    o["mu_a"] = t.mu_a;
    o["mu_b"] = t.mu_b;
    o["q"] = to_json(t.q);
    o["residual"] = t.residual;
  }
  return o;
}

inline json to_json(const StationaryReport& r) {
  json branches = json::array();
  for (auto b : r.node_branches) branches.push_back(to_string(b));
  return {{"verdict", to_string(r.verdict)},
          {"grad_norm", r.grad_norm},
          {"restricted_spectrum", r.restricted_spectrum},
          {"degenerate", r.degenerate},
          {"mu", r.strengths.mu},
          {"residual", r.strengths.residual},
          {"node_branches", branches},
          {"branches_consistent", r.branches_consistent},
          {"state", to_json(r.state)}};
}

inline json to_json(const StartOutcome& o) {
  json j = {{"start", o.start},
            {"verdict", to_string(o.verdict)},
            {"grad_norm", o.grad_norm},
            {"min_eigenvalue", o.min_eigenvalue},
            {"deviation", o.deviation},
            {"escapes", o.escapes},
            {"state", to_json(o.terminal)}};
  if (!o.error.empty()) j["error"] = o.error;
  return j;
}

// Deterministic for fixed inputs unless include_timing is set.
inline json survey_to_json(const SurveyReport& r, bool include_timing = false) {
  json counts = json::object();
  for (auto v : kStartVerdicts) counts[to_string(v)] = r.count(v);
  json ex = json::array();
  for (const auto& o : r.exemplars) ex.push_back(to_json(o));
  json failures = json::array();
  for (const auto& o : r.outcomes)
    if (o.verdict == StartVerdict::failed) failures.push_back({{"start", o.start}, {"error", o.error}});
  json j = {{"graph_id", r.graph_id}, {"n", r.n},           {"edges", r.edges},
            {"n_starts", r.n_starts}, {"seed", r.seed},     {"counts", counts},
            {"pct_sync", 100.0 * r.fraction_sync()},       {"exemplars", ex},
            {"failures", failures}};
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

inline const char* survey_csv_header() { return "graph_id,n,n_starts,pct_sync,n_nonsync,n_undecided\n"; }

inline std::string survey_csv_row(const SurveyReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.graph_id << ',' << r.n << ',' << r.n_starts << ',' << 100.0 * r.fraction_sync() << ','
     << r.count(StartVerdict::sosp_nonsync) << ',' << r.count(StartVerdict::undecided) << '\n';
  return os.str();
}

inline std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t n = tr.terminal.size();
  os << 't';
  for (std::size_t i = 0; i < n; ++i) os << ",theta_" << i;
  os << ",energy\n";
  for (const auto& s : tr.samples) {
    os << s.t;
    for (double x : s.state.theta) os << ',' << x;
    os << ',' << s.energy << '\n';
  }
  return os.str();
}

inline json to_json(const NodeEvidence& e) {
  json j = {{"node", e.node}, {"depth", e.depth}, {"verdict", to_string(e.verdict)}, {"mu", e.mu}};
  if (e.verdict == NodeVerdict::leaf) return j;
  j["anchor"] = to_json(e.anchor);
  j["anchor_norm"] = e.anchor_norm;
  if (e.exclusion_witness) j["exclusion_witness"] = *e.exclusion_witness;
  json s1 = json::array();
  for (const auto& a : e.alignments) {
    s1.push_back({{"child", a.child},
                  {"branch", to_string(a.outcome)},
                  {"inner", a.inner},
                  {"cross", a.cross},
                  {"witness_value", a.witness_value}});
  }
  json s2 = json::array();
  for (const auto& t : e.sibling_twins) s2.push_back(to_json(t));
  json s3 = json::array();
  for (const auto& c : e.parent_child) {
    json x = {{"child", c.child}, {"outcome", to_string(c.outcome)}, {"mu_parent", c.mu_parent},
              {"mu_child", c.mu_child}};
    if (!c.reason.empty()) x["reason"] = c.reason;
    s3.push_back(x);
  }
  j["step1_alignment"] = s1;
  j["step2_sibling_twins"] = s2;
  j["step3_parent_child"] = s3;
  if (!e.reason.empty()) j["reason"] = e.reason;
  return j;
}

inline json certificate_to_json(const SyncCertificate& c) {
  json layers = json::array();
  for (const auto& l : c.layers) {
    json nodes = json::array();
    for (const auto& e : l.nodes) nodes.push_back(to_json(e));
    layers.push_back({{"depth", l.depth}, {"nodes", nodes}});
  }
  json overall = c.certified ? json{{"status", "certified_sync"}}
                             : json{{"status", "failed"},
                                    {"node", c.failed_node ? json(*c.failed_node) : json(nullptr)},
                                    {"reason", c.failure_reason}};
  return {{"tree", to_json(c.tree)},
          {"state", to_json(c.state)},
          {"deviation", c.deviation},
          {"layers", layers},
          {"overall", overall}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace qtsync::io
