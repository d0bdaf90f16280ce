#pragma once

#include <Eigen/Dense>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "qtsync/dynamics.hpp"
#include "qtsync/energy.hpp"
#include "qtsync/newton.hpp"
#include "qtsync/rng.hpp"

namespace qtsync {

enum class Verdict { non_stationary, strict_saddle, sosp_sync, sosp_nonsync };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::non_stationary: return "non_stationary";
    case Verdict::strict_saddle: return "strict_saddle";
    case Verdict::sosp_sync: return "sosp_sync";
    case Verdict::sosp_nonsync: return "sosp_nonsync";
  }
  return "?";
}

inline bool is_sosp(Verdict v) { return v == Verdict::sosp_sync || v == Verdict::sosp_nonsync; }

// Which alternative of the second-order node condition holds at a node:
// the neighbour sum vanishes, or it points along the node's own phasor.
enum class NodeBranch { zero_sum, aligned, violated };

inline const char* to_string(NodeBranch b) {
  switch (b) {
    case NodeBranch::zero_sum: return "zero_sum";
    case NodeBranch::aligned: return "aligned";
    case NodeBranch::violated: return "violated";
  }
  return "?";
}

struct StationaryReport {
  PhaseState state;
  double grad_norm = 0.0;
  std::vector<double> restricted_spectrum;  // ascending
  Eigen::VectorXd min_direction;            // unit eigenvector of the smallest restricted eigenvalue, full coordinates
  Verdict verdict = Verdict::non_stationary;
  bool degenerate = false;                  // smallest restricted eigenvalue within +-eig_tol
  Strengths strengths;
  std::vector<NodeBranch> node_branches;
  bool branches_consistent = true;          // no node violates the second-order node condition

  double min_eigenvalue() const {
    return restricted_spectrum.empty() ? 0.0 : restricted_spectrum.front();
  }
};

// Orthonormal basis (n x (n-1)) of the complement of the all-ones vector
// (Helmert contrasts).
inline Eigen::MatrixXd gauge_complement_basis(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(N, std::max<Eigen::Index>(N - 1, 0));
  for (Eigen::Index k = 1; k < N; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    for (Eigen::Index i = 0; i < k; ++i) q(i, k - 1) = scale;
    q(k, k - 1) = -static_cast<double>(k) * scale;
  }
  return q;
}

inline NodeBranch node_branch(Vec2 neighbor_sum, Vec2 v, const Tolerances& tols) {
  const double len = norm(neighbor_sum);
  if (len <= tols.zero) return NodeBranch::zero_sum;
  const double c = dot(neighbor_sum, v) / len;
  const double s = std::abs(cross(neighbor_sum, v)) / len;
  return (c > 0.0 && s <= tols.sync) ? NodeBranch::aligned : NodeBranch::violated;
}

// Second-order classification modulo the rotation gauge.
inline StationaryReport classify(const Graph& g, const PhaseState& s, const Tolerances& tols = {}) {
  detail::check_length(g, s);
  for (double t : s.theta) {
    if (!std::isfinite(t)) throw std::invalid_argument("classify: state has non-finite angles");
  }
  StationaryReport rep;
  rep.state = s;
  rep.grad_norm = gradient_norm(g, s);
  rep.strengths = strengths(g, s);

  const Eigen::MatrixXd basis = gauge_complement_basis(g.n());
  if (g.n() >= 2) {
    const Eigen::MatrixXd restricted = basis.transpose() * hessian(g, s) * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(restricted);
    if (es.info() != Eigen::Success) throw std::runtime_error("classify: eigensolver failed");
    const auto& ev = es.eigenvalues();
    rep.restricted_spectrum.assign(ev.data(), ev.data() + ev.size());
    rep.min_direction = basis * es.eigenvectors().col(0);
  } else {
    rep.min_direction = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.n()));
  }
  const double lmin = rep.min_eigenvalue();
  rep.degenerate = g.n() >= 2 && std::abs(lmin) < tols.eig;

  if (rep.grad_norm > tols.grad) {
    rep.verdict = Verdict::non_stationary;
  } else if (lmin < -tols.eig) {
    rep.verdict = Verdict::strict_saddle;
  } else {
    rep.verdict = is_synchronized(s, tols.sync) ? Verdict::sosp_sync : Verdict::sosp_nonsync;
  }

  rep.node_branches.resize(g.n());
  for (Vertex i = 0; i < g.n(); ++i) {
    rep.node_branches[i] = node_branch(rep.strengths.neighbor_sum[i], s.phasor(i), tols);
    if (rep.node_branches[i] == NodeBranch::violated) rep.branches_consistent = false;
  }
  return rep;
}

enum class StartVerdict { sosp_sync, sosp_nonsync, strict_saddle, non_stationary, undecided, failed };

inline constexpr std::array kStartVerdicts = {StartVerdict::sosp_sync,      StartVerdict::sosp_nonsync,
                                              StartVerdict::strict_saddle,  StartVerdict::non_stationary,
                                              StartVerdict::undecided,      StartVerdict::failed};

inline const char* to_string(StartVerdict v) {
  switch (v) {
    case StartVerdict::sosp_sync: return "sosp_sync";
    case StartVerdict::sosp_nonsync: return "sosp_nonsync";
    case StartVerdict::strict_saddle: return "strict_saddle";
    case StartVerdict::non_stationary: return "non_stationary";
    case StartVerdict::undecided: return "undecided";
    case StartVerdict::failed: return "failed";
  }
  return "?";
}

struct SurveyOptions {
  FlowOptions flow{.max_time = 1e4, .dt_initial = 0.1, .grad_tol = 1e-8, .max_steps = 1'000'000,
                   .record_every = 1'000'000};
  Tolerances tols;
  NewtonOptions newton;
  std::size_t max_escapes = 20;
  double escape_step = 1e-2;
  std::size_t workers = 1;
  std::size_t max_exemplars = 10;
};

struct StartOutcome {
  std::size_t start = 0;
  StartVerdict verdict = StartVerdict::failed;
  PhaseState initial;
  PhaseState terminal;
  double grad_norm = 0.0;
  double min_eigenvalue = 0.0;
  double deviation = 0.0;
  std::size_t escapes = 0;
  std::string error;
};

struct SurveyReport {
  std::string graph_id;
  std::size_t n = 0;
  std::size_t edges = 0;
  std::size_t n_starts = 0;
  std::uint64_t seed = 0;
  std::map<StartVerdict, std::size_t> counts;
  std::vector<StartOutcome> outcomes;   // in start order
  std::vector<StartOutcome> exemplars;  // first non-synchronized SOSPs
  double wall_seconds = 0.0;

  std::size_t count(StartVerdict v) const {
    auto it = counts.find(v);
    return it == counts.end() ? 0 : it->second;
  }
  double fraction_sync() const {
    return n_starts == 0 ? 0.0 : static_cast<double>(count(StartVerdict::sosp_sync)) / static_cast<double>(n_starts);
  }
};

// Initial state of a survey start: uniform angles from stream `start`.
inline PhaseState survey_initial_state(std::size_t n, std::uint64_t seed, std::size_t start) {
  StreamRng rng(seed, start);
  return random_state(n, rng);
}

// One survey start: flow, Newton polish, classify; a strict saddle is left
// along its most negative restricted eigenvector and the flow resumed.
inline StartOutcome run_start(const Graph& g, std::uint64_t seed, std::size_t start, const SurveyOptions& opts) {
  StartOutcome out;
  out.start = start;
  out.initial = survey_initial_state(g.n(), seed, start);
  PhaseState x = out.initial;
  try {
    while (true) {
      const Trajectory tr = integrate(g, x, opts.flow);
      if (tr.termination != Termination::converged) {
        out.verdict = StartVerdict::undecided;
        out.terminal = tr.terminal;
        out.grad_norm = gradient_norm(g, tr.terminal);
        return out;
      }
      const PhaseState refined = refine_newton(g, tr.terminal, opts.newton);
      const StationaryReport rep = classify(g, refined, opts.tols);
      out.terminal = refined;
      out.grad_norm = rep.grad_norm;
      out.min_eigenvalue = rep.min_eigenvalue();
      out.deviation = aligned_deviation(refined);
      if (rep.verdict == Verdict::strict_saddle && out.escapes < opts.max_escapes) {
        ++out.escapes;
        x = refined;
        for (std::size_t i = 0; i < x.size(); ++i) {
          x.theta[i] += opts.escape_step * rep.min_direction(static_cast<Eigen::Index>(i));
        }
        continue;
      }
      switch (rep.verdict) {
        case Verdict::sosp_sync: out.verdict = StartVerdict::sosp_sync; break;
        case Verdict::sosp_nonsync: out.verdict = StartVerdict::sosp_nonsync; break;
        case Verdict::strict_saddle: out.verdict = StartVerdict::strict_saddle; break;
        case Verdict::non_stationary: out.verdict = StartVerdict::non_stationary; break;
      }
      return out;
    }
  } catch (const NewtonFailure& f) {
    out.verdict = StartVerdict::failed;
    out.terminal = f.last_iterate;
    out.error = f.what();
  } catch (const std::exception& e) {
    out.verdict = StartVerdict::failed;
    out.terminal = x;
    out.error = e.what();
  }
  return out;
}

// Runs n_starts independent starts, optionally on several threads. Results
// are stored by start index, so the report does not depend on the worker
// count.
inline SurveyReport multistart_survey(const Graph& g, std::size_t n_starts, std::uint64_t seed,
                                      const SurveyOptions& opts = {}, std::string graph_id = "graph") {
  if (n_starts == 0) throw std::invalid_argument("survey needs at least one start");
  opts.flow.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SurveyReport rep;
  rep.graph_id = std::move(graph_id);
  rep.n = g.n();
  rep.edges = g.edge_count();
  rep.n_starts = n_starts;
  rep.seed = seed;
  rep.outcomes.resize(n_starts);

  const std::size_t workers = std::max<std::size_t>(1, std::min(opts.workers, n_starts));
  if (workers == 1) {
    for (std::size_t k = 0; k < n_starts; ++k) rep.outcomes[k] = run_start(g, seed, k, opts);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n_starts; k = next++) rep.outcomes[k] = run_start(g, seed, k, opts);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (auto v : kStartVerdicts) rep.counts[v] = 0;
  for (const auto& o : rep.outcomes) {
    ++rep.counts[o.verdict];
    if (o.verdict == StartVerdict::sosp_nonsync && rep.exemplars.size() < opts.max_exemplars) {
      rep.exemplars.push_back(o);
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace qtsync
