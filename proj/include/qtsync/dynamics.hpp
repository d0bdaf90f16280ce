#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtsync/energy.hpp"
#include "qtsync/newton.hpp"

namespace qtsync {

struct FlowOptions {
  double max_time = 1e4;
  double dt_initial = 0.1;
  double grad_tol = 1e-8;
  std::size_t max_steps = 1'000'000;
  std::size_t record_every = 1;

  void validate() const {
    if (!(max_time > 0) || !(dt_initial > 0) || !(grad_tol > 0) || max_steps == 0 || record_every == 0) {
      throw std::invalid_argument("flow options must all be positive");
    }
  }
};

enum class Termination { converged, max_time, max_steps };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_time: return "max_time";
    case Termination::max_steps: return "max_steps";
  }
  return "?";
}

struct Sample {
  double t;
  PhaseState state;
  double energy;
};

struct Trajectory {
  std::vector<Sample> samples;
  PhaseState terminal;
  Termination termination = Termination::converged;
  double final_time = 0.0;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
};

// Per-step energy tolerance for accepting an RK4 step.
inline constexpr double kEnergyAcceptSlack = 1e-12;

namespace detail {

inline PhaseState rk4_step(const Graph& g, const PhaseState& x, double h) {
  const std::size_t n = x.size();
  const auto k1 = kuramoto_rhs(g, x);
  PhaseState y = x;
  for (std::size_t i = 0; i < n; ++i) y.theta[i] = x.theta[i] + 0.5 * h * k1[i];
  const auto k2 = kuramoto_rhs(g, y);
  for (std::size_t i = 0; i < n; ++i) y.theta[i] = x.theta[i] + 0.5 * h * k2[i];
  const auto k3 = kuramoto_rhs(g, y);
  for (std::size_t i = 0; i < n; ++i) y.theta[i] = x.theta[i] + h * k3[i];
  const auto k4 = kuramoto_rhs(g, y);
  for (std::size_t i = 0; i < n; ++i) {
    y.theta[i] = x.theta[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y;
}

}  // namespace detail

// Classical RK4 on d theta/dt = -grad E. A step that raises the energy is
// rejected and dt halved; after ten accepted steps dt doubles again, never
// beyond dt_initial. Angles are not wrapped.
inline Trajectory integrate(const Graph& g, const PhaseState& s0, const FlowOptions& opts = {}) {
  detail::check_length(g, s0);
  opts.validate();
  Trajectory tr;
  PhaseState x = s0;
  double t = 0.0;
  double e = energy(g, x);
  double dt = opts.dt_initial;
  std::size_t streak = 0;
  tr.samples.push_back({t, x, e});
  bool last_recorded = true;

  while (true) {
    if (gradient_norm(g, x) <= opts.grad_tol) {
      tr.termination = Termination::converged;
      break;
    }
    if (tr.steps >= opts.max_steps) {
      tr.termination = Termination::max_steps;
      break;
    }
    if (t >= opts.max_time) {
      tr.termination = Termination::max_time;
      break;
    }
    const double h = std::min(dt, opts.max_time - t);
    PhaseState trial = detail::rk4_step(g, x, h);
    const double et = energy(g, trial);
    if (!std::isfinite(et)) {
      throw std::runtime_error("non-finite state at t=" + std::to_string(t) + "; integrator failure");
    }
    if (et > e + kEnergyAcceptSlack) {
      ++tr.rejected_steps;
      streak = 0;
      dt *= 0.5;
      if (dt < 1e-14) throw std::runtime_error("step size underflow at t=" + std::to_string(t));
      continue;
    }
    x = std::move(trial);
    e = et;
    t += h;
    ++tr.steps;
    if (++streak >= 10 && dt < opts.dt_initial) {
      dt = std::min(2.0 * dt, opts.dt_initial);
      streak = 0;
    }
    last_recorded = tr.steps % opts.record_every == 0;
    if (last_recorded) tr.samples.push_back({t, x, e});
  }
  if (!last_recorded) tr.samples.push_back({t, x, e});
  tr.terminal = std::move(x);
  tr.final_time = t;
  return tr;
}

enum class FlowVerdict { sync, nonsync_stationary, undecided };

inline const char* to_string(FlowVerdict v) {
  switch (v) {
    case FlowVerdict::sync: return "sync";
    case FlowVerdict::nonsync_stationary: return "nonsync_stationary";
    case FlowVerdict::undecided: return "undecided";
  }
  return "?";
}

struct FlowOutcome {
  FlowVerdict verdict = FlowVerdict::undecided;
  Trajectory trajectory;
  PhaseState refined;
};

// Integrate, polish the endpoint with Newton, then test synchrony. Undecided
// when the flow budget runs out or the polish fails.
inline FlowOutcome flow_to_verdict(const Graph& g, const PhaseState& s0, const FlowOptions& opts = {},
                                   const Tolerances& tols = {}, const NewtonOptions& newton = {}) {
  FlowOutcome out;
  out.trajectory = integrate(g, s0, opts);
  out.refined = out.trajectory.terminal;
  if (out.trajectory.termination != Termination::converged) return out;
  try {
    out.refined = refine_newton(g, out.trajectory.terminal, newton);
  } catch (const NewtonFailure& f) {
    out.refined = f.last_iterate;
    return out;
  }
  out.verdict = is_synchronized(out.refined, tols.sync) ? FlowVerdict::sync : FlowVerdict::nonsync_stationary;
  return out;
}

}  // namespace qtsync
