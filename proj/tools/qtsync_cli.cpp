// qtsync command-line tool: gen, flow, survey, certify, twins.
//
// Exit codes: 0 success, 1 error (bad input or usage), 2 undecided or not
// certified.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtsync/enumerate.hpp"
#include "qtsync/json_io.hpp"
#include "qtsync/qtsync.hpp"

namespace {

using qtsync::io::json;

struct Global {
  std::uint64_t seed = 20240601;
  double tol_grad = 1e-10;
  double tol_eig = 1e-8;
  double tol_sync = 1e-6;
  double tol_zero = 1e-7;
  std::size_t workers = 1;
  std::string out = "-";

  qtsync::Tolerances tolerances() const {
    if (!(tol_grad > 0) || !(tol_eig > 0) || !(tol_sync > 0) || !(tol_zero > 0)) {
      throw std::invalid_argument("all tolerances must be positive");
    }
    return {tol_grad, tol_eig, tol_sync, tol_zero};
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<qtsync::RootedForest::Parent> parse_parents(const std::string& text) {
  std::vector<qtsync::RootedForest::Parent> parent;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok == "null" || tok == "-" || tok == "none") {
      parent.emplace_back();
    } else {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("bad parent entry '" + tok + "'");
      parent.emplace_back(static_cast<qtsync::Vertex>(v));
    }
  }
  return parent;
}

// "0-1,1-2" or "0 1;1 2"
std::vector<qtsync::Edge> parse_edges(const std::string& text) {
  std::vector<qtsync::Edge> edges;
  std::string norm = text;
  for (char& c : norm)
    if (c == '-' || c == ';' || c == ',' || c == ':') c = ' ';
  std::stringstream ss(norm);
  long a = 0, b = 0;
  while (ss >> a) {
    if (!(ss >> b)) throw std::invalid_argument("edge list has an odd number of endpoints");
    if (a < 0 || b < 0) throw std::invalid_argument("edge endpoints must be non-negative");
    edges.emplace_back(static_cast<qtsync::Vertex>(a), static_cast<qtsync::Vertex>(b));
  }
  if (!ss.eof()) throw std::invalid_argument("could not parse edge list '" + text + "'");
  return edges;
}

int run(int argc, char** argv) {
  CLI::App app{"Kuramoto energy landscapes on quasi-threshold graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "64-bit seed for every random draw");
  app.add_option("--tol-grad", g.tol_grad, "stationarity tolerance on ||grad||");
  app.add_option("--tol-eig", g.tol_eig, "PSD slack on the restricted Hessian spectrum");
  app.add_option("--tol-sync", g.tol_sync, "angular deviation counted as synchronized");
  app.add_option("--tol-zero", g.tol_zero, "norm below which a phasor sum counts as zero");
  app.add_option("--workers", g.workers, "worker threads for surveys")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path ('-' for stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a graph");
  std::string family;
  std::string bits, parents, edge_text;
  std::size_t clique = 1, indep = 0, side_a = 1, side_b = 1, edge_n = 0;
  gen->add_option("family", family, "threshold | qt-tree | split | bipartite | edge-list")
      ->required()
      ->check(CLI::IsMember({"threshold", "qt-tree", "split", "bipartite", "edge-list"}));
  gen->add_option("--bits", bits, "threshold insertion sequence, e.g. 10101011001");
  gen->add_option("--parents", parents, "parent array, e.g. \"null,0,0,1\"");
  gen->add_option("--clique", clique, "clique size (split)");
  gen->add_option("--independent", indep, "independent set size (split)");
  gen->add_option("--a", side_a, "first side (bipartite)");
  gen->add_option("--b", side_b, "second side (bipartite)");
  gen->add_option("--n", edge_n, "vertex count (edge-list)");
  gen->add_option("--edges", edge_text, "edges, e.g. \"0-1,1-2\" (edge-list)");

  // flow
  auto* flow = app.add_subcommand("flow", "integrate the gradient flow");
  std::string graph_path, state_path, csv_path;
  bool random_start = false;
  qtsync::FlowOptions fopts;
  flow->add_option("--graph", graph_path, "graph JSON")->required();
  auto* state_opt = flow->add_option("--state", state_path, "initial state JSON");
  flow->add_flag("--random", random_start, "uniform random initial state from --seed")->excludes(state_opt);
  flow->add_option("--max-time", fopts.max_time, "time budget")->capture_default_str();
  flow->add_option("--dt", fopts.dt_initial, "initial (and largest) step")->capture_default_str();
  flow->add_option("--grad-tol", fopts.grad_tol, "stop when ||grad|| drops below this")->capture_default_str();
  flow->add_option("--max-steps", fopts.max_steps, "step budget")->capture_default_str();
  flow->add_option("--record-every", fopts.record_every, "keep every k-th accepted step in the trajectory")->capture_default_str();
  flow->add_option("--csv", csv_path, "trajectory CSV path ('-' for stdout)");

  // survey
  auto* survey = app.add_subcommand("survey", "multistart landscape survey");
  std::size_t starts = 100, enumerate_n = 0, max_escapes = 20;
  bool timing = false;
  std::string survey_graph, survey_csv, graph_id;
  auto* sg = survey->add_option("--graph", survey_graph, "graph JSON");
  auto* se = survey->add_option("--enumerate-trees", enumerate_n,
                                "survey the closures of every rooted tree with 1..n nodes");
  sg->excludes(se);
  survey->add_option("--starts", starts, "random starts per graph");
  survey->add_option("--id", graph_id, "graph id used in reports");
  survey->add_option("--csv", survey_csv, "summary CSV path");
  survey->add_option("--max-escapes", max_escapes, "saddle escapes per start");
  survey->add_flag("--timing", timing, "include wall time (output is then not reproducible)");

  // certify
  auto* cert = app.add_subcommand("certify", "certify that an SOSP is synchronized");
  std::string cert_graph, cert_tree, cert_state;
  cert->add_option("--graph", cert_graph, "graph JSON")->required();
  cert->add_option("--tree", cert_tree, "forest JSON")->required();
  cert->add_option("--state", cert_state, "state JSON")->required();

  // twins
  auto* twins = app.add_subcommand("twins", "structural / geometric twin report");
  std::string twin_graph, twin_state;
  twins->add_option("--graph", twin_graph, "graph JSON")->required();
  twins->add_option("--state", twin_state, "state JSON; adds geometric classification");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto tols = g.tolerances();

  if (gen->parsed()) {
    json out;
    if (family == "threshold") {
      out = qtsync::io::to_json(qtsync::threshold_from_sequence(bits));
    } else if (family == "qt-tree") {
      if (parents.empty()) throw std::invalid_argument("qt-tree needs --parents");
      const qtsync::RootedForest f(parse_parents(parents));
      out = {{"graph", qtsync::io::to_json(qtsync::comparability_closure(f))}, {"forest", qtsync::io::to_json(f)}};
    } else if (family == "split") {
      out = qtsync::io::to_json(qtsync::complete_split(clique, indep));
    } else if (family == "bipartite") {
      out = qtsync::io::to_json(qtsync::complete_bipartite(side_a, side_b));
    } else {
      out = qtsync::io::to_json(qtsync::from_edge_list(edge_n, parse_edges(edge_text)));
    }
    emit(g.out, dump(out));
    return 0;
  }

  if (flow->parsed()) {
    const auto graph = qtsync::io::graph_from_json(qtsync::io::read_json_file(graph_path));
    qtsync::PhaseState s0;
    if (!state_path.empty()) {
      s0 = qtsync::io::state_from_json(qtsync::io::read_json_file(state_path));
    } else if (random_start) {
      qtsync::StreamRng rng(g.seed, 0);
      s0 = qtsync::random_state(graph.n(), rng);
    } else {
      throw std::invalid_argument("flow needs --state or --random");
    }
    const auto tr = qtsync::integrate(graph, s0, fopts);
    if (!csv_path.empty()) emit(csv_path, qtsync::io::trajectory_csv(tr));
    json term = qtsync::io::to_json(tr.terminal);
    term["termination"] = qtsync::to_string(tr.termination);
    term["t"] = tr.final_time;
    term["energy"] = qtsync::energy(graph, tr.terminal);
    term["grad_norm"] = qtsync::gradient_norm(graph, tr.terminal);
    emit(g.out, dump(term));
    return tr.termination == qtsync::Termination::converged ? 0 : 2;
  }

  if (survey->parsed()) {
    if (starts == 0) throw std::invalid_argument("--starts must be at least 1");
    qtsync::SurveyOptions sopts;
    sopts.tols = tols;
    sopts.workers = g.workers;
    sopts.max_escapes = max_escapes;
    std::vector<std::pair<std::string, qtsync::Graph>> graphs;
    if (!survey_graph.empty()) {
      graphs.emplace_back(graph_id.empty() ? survey_graph : graph_id,
                          qtsync::io::graph_from_json(qtsync::io::read_json_file(survey_graph)));
    } else if (enumerate_n > 0) {
      std::size_t k = 0;
      for (const auto& t : qtsync::enumerate_rooted_trees_up_to(enumerate_n)) {
        graphs.emplace_back("tree-n" + std::to_string(t.size()) + "-" + std::to_string(k++),
                            qtsync::comparability_closure(t));
      }
    } else {
      throw std::invalid_argument("survey needs --graph or --enumerate-trees");
    }
    json reports = json::array();
    std::string csv = qtsync::io::survey_csv_header();
    bool all_decided = true;
    for (const auto& [id, graph] : graphs) {
      const auto rep = qtsync::multistart_survey(graph, starts, g.seed, sopts, id);
      reports.push_back(qtsync::io::survey_to_json(rep, timing));
      csv += qtsync::io::survey_csv_row(rep);
      all_decided = all_decided && rep.count(qtsync::StartVerdict::undecided) == 0;
    }
    emit(g.out, dump(graphs.size() == 1 ? reports.front() : json{{"surveys", reports}}));
    if (!survey_csv.empty()) emit(survey_csv, csv);
    return all_decided ? 0 : 2;
  }

  if (cert->parsed()) {
    const auto graph = qtsync::io::graph_from_json(qtsync::io::read_json_file(cert_graph));
    const auto tree = qtsync::io::forest_from_json(qtsync::io::read_json_file(cert_tree));
    const auto state = qtsync::io::state_from_json(qtsync::io::read_json_file(cert_state));
    qtsync::CertifyOptions copts;
    copts.tols = tols;
    const auto c = qtsync::certify(graph, tree, state, copts);
    emit(g.out, dump(qtsync::io::certificate_to_json(c)));
    return c.certified ? 0 : 2;
  }

  if (twins->parsed()) {
    const auto graph = qtsync::io::graph_from_json(qtsync::io::read_json_file(twin_graph));
    json arr = json::array();
    if (twin_state.empty()) {
      for (const auto& t : qtsync::structural_twins(graph)) arr.push_back(qtsync::io::to_json(t));
    } else {
      const auto state = qtsync::io::state_from_json(qtsync::io::read_json_file(twin_state));
      const auto structural = qtsync::structural_twins(graph);
      const auto geometric = qtsync::geometric_twins_at(graph, state, tols.zero);
      for (std::size_t i = 0; i < structural.size(); ++i) {
        json rec = qtsync::io::to_json(geometric[i]);
        rec["structural"] = qtsync::to_string(structural[i].kind);
        arr.push_back(rec);
      }
    }
    emit(g.out, dump(arr));
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
