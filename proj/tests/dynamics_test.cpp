#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qtsync/dynamics.hpp"
#include "qtsync/forest.hpp"
#include "qtsync/rng.hpp"

using namespace qtsync;

namespace {

PhaseState twisted(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = 2 * kPi * static_cast<double>(j) / static_cast<double>(n);
  return PhaseState(std::move(t));
}

void expect_monotone(const Trajectory& tr) {
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    EXPECT_LE(tr.samples[k].energy, tr.samples[k - 1].energy + 1e-9);
    EXPECT_GT(tr.samples[k].t, tr.samples[k - 1].t);
  }
}

}  // namespace

TEST(Integrate, EquilibriumIsFixed) {
  const PhaseState s(std::vector<double>(4, 0.3));
  const auto tr = integrate(complete_graph(4), s);
  EXPECT_EQ(tr.termination, Termination::converged);
  EXPECT_EQ(tr.final_time, 0.0);
  EXPECT_EQ(tr.terminal.theta, s.theta);
}

// Two oscillators: the difference obeys d(delta)/dt = -2 sin(delta), so it
// contracts to zero from any delta in (0, pi) and tan(delta/2) decays like
// exp(-2t).
TEST(Integrate, TwoOscillatorsMatchClosedForm) {
  FlowOptions o;
  o.grad_tol = 1e-12;
  o.dt_initial = 0.01;
  const auto tr = integrate(complete_graph(2), PhaseState({0.0, 0.1}), o);
  EXPECT_EQ(tr.termination, Termination::converged);
  EXPECT_LT(energy(complete_graph(2), tr.terminal), 1e-20);
  for (const auto& smp : tr.samples) {
    const double delta = smp.state.theta[1] - smp.state.theta[0];
    const double expect = 2 * std::atan(std::tan(0.05) * std::exp(-2 * smp.t));
    ASSERT_NEAR(delta, expect, 1e-9);
  }
  // The mean phase is conserved.
  EXPECT_NEAR(tr.terminal.theta[0] + tr.terminal.theta[1], 0.1, 1e-12);
  expect_monotone(tr);
}

TEST(Integrate, TwistedCycleIsStationary) {
  const PhaseState s = twisted(5);
  EXPECT_LT(gradient_norm(cycle_graph(5), s), 1e-14);
  const auto tr = integrate(cycle_graph(5), s);
  EXPECT_EQ(tr.termination, Termination::converged);
  EXPECT_EQ(tr.terminal.theta, s.theta);
}

TEST(Integrate, BudgetExhaustion) {
  FlowOptions o;
  o.max_steps = 1;
  const auto tr = integrate(complete_bipartite(2, 3), PhaseState({0.0, 3.0, 1.0, 2.0, 5.0}), o);
  EXPECT_EQ(tr.termination, Termination::max_steps);
  FlowOptions t;
  t.max_time = 0.05;
  EXPECT_EQ(integrate(complete_bipartite(2, 3), PhaseState({0.0, 3.0, 1.0, 2.0, 5.0}), t).termination,
            Termination::max_time);
}

TEST(Integrate, InvalidOptions) {
  FlowOptions o;
  o.dt_initial = 0.0;
  EXPECT_THROW(integrate(complete_graph(2), PhaseState({0.0, 1.0}), o), std::invalid_argument);
  EXPECT_THROW(integrate(complete_graph(2), PhaseState({0.0}), {}), std::invalid_argument);
}

TEST(Integrate, EnergyMonotoneOnRandomGraphs) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    StreamRng rng(31, k);
    const Graph g = oracle::random_graph(3 + rng.below(9), 0.6, rng);
    FlowOptions o;
    o.dt_initial = 0.4;  // large enough that some steps get rejected
    const auto tr = integrate(g, random_state(g.n(), rng), o);
    expect_monotone(tr);
  }
}

TEST(Integrate, GaugeEquivariance) {
  StreamRng rng(32, 0);
  const Graph g = complete_split(2, 4);
  for (int k = 0; k < 10; ++k) {
    const PhaseState s = random_state(g.n(), rng);
    const double c = rng.uniform(-4, 4);
    const auto a = integrate(g, s);
    const auto b = integrate(g, s.shifted(c));
    for (std::size_t i = 0; i < g.n(); ++i) {
      EXPECT_LT(circular_distance(a.terminal.theta[i] + c, b.terminal.theta[i]), 1e-8);
    }
  }
}

TEST(Integrate, NearEquilibriumDoesNotDrift) {
  // Constant state plus an exact equilibrium of C5 with tiny gradient.
  const PhaseState s = twisted(5).shifted(0.7);
  ASSERT_LT(gradient_norm(cycle_graph(5), s), 1e-12);
  FlowOptions o;
  o.grad_tol = 1e-15;
  o.max_time = 50;
  const auto tr = integrate(cycle_graph(5), s, o);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_LT(std::abs(tr.terminal.theta[i] - s.theta[i]), 1e-9);
}

TEST(FlowVerdict, Cases) {
  StreamRng rng(33, 0);
  const RootedForest t(std::vector<RootedForest::Parent>{std::nullopt, 0, 0, 1, 1, 2});
  const Graph qt = comparability_closure(t);
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(flow_to_verdict(qt, random_state(qt.n(), rng)).verdict, FlowVerdict::sync);
  }
  EXPECT_EQ(flow_to_verdict(cycle_graph(5), twisted(5)).verdict, FlowVerdict::nonsync_stationary);
  FlowOptions o;
  o.max_steps = 1;
  EXPECT_EQ(flow_to_verdict(qt, PhaseState({0.0, 3.0, 1.0, 2.0, 5.0, 4.0}), o).verdict, FlowVerdict::undecided);
}

TEST(Newton, AlreadyStationaryIsUnchanged) {
  const PhaseState s = twisted(5);
  const PhaseState r = refine_newton(cycle_graph(5), s);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.theta[i], s.theta[i], 1e-14);
}

TEST(Newton, PolishesTwoOscillators) {
  const PhaseState r = refine_newton(complete_graph(2), PhaseState({0.2, 0.2 + 1e-4}));
  EXPECT_EQ(r.theta[0], 0.2);  // pinned
  EXPECT_NEAR(r.theta[1], 0.2, 1e-12);
  EXPECT_LE(gradient_norm(complete_graph(2), r), 1e-12);
}

TEST(Newton, ReturnsToTwistedState) {
  StreamRng rng(34, 0);
  const Graph c5 = cycle_graph(5);
  for (int k = 0; k < 10; ++k) {
    PhaseState s = twisted(5);
    for (auto& t : s.theta) t += rng.uniform(-1e-3, 1e-3);
    const PhaseState r = refine_newton(c5, s);
    EXPECT_LE(gradient_norm(c5, r), 1e-12);
    // Equal to the twisted state up to a rotation.
    const double shift = r.theta[0];
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_LT(circular_distance(r.theta[i] - shift, twisted(5).theta[i]), 1e-10);
    }
  }
}
