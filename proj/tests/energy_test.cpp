#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qtsync/energy.hpp"
#include "qtsync/landscape.hpp"
#include "qtsync/rng.hpp"

using namespace qtsync;

namespace {

struct Case {
  Graph g;
  PhaseState s;
};

std::vector<Case> random_cases(std::size_t count, std::uint64_t seed) {
  std::vector<Case> out;
  for (std::size_t k = 0; k < count; ++k) {
    StreamRng rng(seed, k);
    const std::size_t n = 2 + rng.below(11);
    Graph g = oracle::random_graph(n, 0.5, rng);
    PhaseState s = random_state(n, rng);
    out.push_back({std::move(g), std::move(s)});
  }
  return out;
}

const PhaseState kAntipodalP3({0.0, kPi, 0.0});

}  // namespace

TEST(Energy, ConstantStateIsZero) {
  EXPECT_EQ(energy(complete_graph(5), PhaseState(std::vector<double>(5, 1.3))), 0.0);
}

TEST(Energy, HandValues) {
  EXPECT_DOUBLE_EQ(energy(complete_graph(2), PhaseState({0.0, kPi})), 2.0);
  EXPECT_DOUBLE_EQ(energy(path_graph(3), kAntipodalP3), 4.0);
}

TEST(Energy, LengthMismatch) {
  EXPECT_THROW(energy(path_graph(3), PhaseState({0.0})), std::invalid_argument);
  EXPECT_THROW(gradient(path_graph(3), PhaseState({0.0})), std::invalid_argument);
  EXPECT_THROW(hessian(path_graph(3), PhaseState({0.0})), std::invalid_argument);
  EXPECT_THROW(strengths(path_graph(3), PhaseState({0.0})), std::invalid_argument);
}

TEST(Energy, MatchesOrderedDoubleSumAndBounds) {
  for (const auto& c : random_cases(50, 5)) {
    const double e = energy(c.g, c.s);
    EXPECT_NEAR(e, oracle::energy_double_sum(c.g, c.s), 1e-12);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 2.0 * static_cast<double>(c.g.edge_count()));
    EXPECT_NEAR(energy(c.g, c.s.shifted(2.7)), e, 1e-12);
  }
}

TEST(Gradient, ZeroCases) {
  for (double x : gradient(path_graph(4), PhaseState(std::vector<double>(4, -0.4)))) EXPECT_EQ(x, 0.0);
  for (double x : gradient(path_graph(3), kAntipodalP3)) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(Gradient, FiniteDifferenceOracle) {
  for (const auto& c : random_cases(50, 6)) {
    EXPECT_LT(oracle::rel_error(gradient(c.g, c.s), oracle::fd_gradient(c.g, c.s, 1e-5)), 1e-6);
  }
}

TEST(Gradient, ComponentsSumToZero) {
  for (const auto& c : random_cases(50, 7)) {
    double sum = 0.0;
    for (double x : gradient(c.g, c.s)) sum += x;
    EXPECT_LT(std::abs(sum), 1e-12);
  }
}

TEST(KuramotoRhs, NegatedGradient) {
  for (const auto& c : random_cases(50, 8)) {
    const auto g = gradient(c.g, c.s);
    const auto r = kuramoto_rhs(c.g, c.s);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(r[i], -g[i]);
  }
  const auto r = kuramoto_rhs(complete_graph(2), PhaseState({0.0, kPi / 2}));
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], -1.0);
}

TEST(Hessian, LaplacianAtSync) {
  StreamRng rng(9, 0);
  for (int k = 0; k < 20; ++k) {
    const Graph g = oracle::random_graph(2 + rng.below(10), 0.4, rng);
    const auto h = hessian(g, PhaseState(std::vector<double>(g.n(), rng.uniform(-3, 3))));
    for (Vertex i = 0; i < g.n(); ++i) {
      for (Vertex j = 0; j < g.n(); ++j) {
        const double want = i == j ? static_cast<double>(g.degree(i)) : (g.has_edge(i, j) ? -1.0 : 0.0);
        EXPECT_EQ(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), want);
      }
    }
  }
}

TEST(Hessian, SymmetricRowsSumToZeroAndMatchFiniteDifferences) {
  for (const auto& c : random_cases(50, 10)) {
    const auto h = hessian(c.g, c.s);
    EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((h * Eigen::VectorXd::Ones(h.rows())).cwiseAbs().maxCoeff(), 1e-12);
    const auto fd = oracle::fd_jacobian([&](const PhaseState& x) { return gradient(c.g, x); }, c.s, 1e-5);
    double diff = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < c.g.n(); ++i) {
      for (std::size_t j = 0; j < c.g.n(); ++j) {
        const double hv = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        diff = std::max(diff, std::abs(hv - fd[i][j]));
        scale = std::max(scale, std::abs(hv));
      }
    }
    EXPECT_LT(diff / scale, 1e-5);
  }
}

TEST(Hessian, AntipodalPathIsStrictSaddle) {
  const auto rep = classify(path_graph(3), kAntipodalP3);
  ASSERT_EQ(rep.restricted_spectrum.size(), 2u);
  // H = -L(P3): restricted eigenvalues -3 and -1.
  EXPECT_NEAR(rep.restricted_spectrum[0], -3.0, 1e-12);
  EXPECT_NEAR(rep.restricted_spectrum[1], -1.0, 1e-12);
}

TEST(Strengths, ConstantAndAntipodal) {
  const Graph g = complete_bipartite(2, 3);
  const auto st = strengths(g, PhaseState(std::vector<double>(5, 0.9)));
  for (Vertex i = 0; i < g.n(); ++i) {
    EXPECT_NEAR(st.mu[i], static_cast<double>(g.degree(i)), 1e-12);
    EXPECT_NEAR(st.residual[i], 0.0, 1e-12);
  }
  const auto p = strengths(path_graph(3), kAntipodalP3);
  EXPECT_NEAR(p.mu[0], -1.0, 1e-15);
  EXPECT_NEAR(p.mu[2], -1.0, 1e-15);
  EXPECT_NEAR(p.mu[1], -2.0, 1e-15);
}

// Equilibrium iff every residual vanishes: the residual at i equals |grad_i|.
TEST(Strengths, ResidualEqualsGradientMagnitude) {
  for (const auto& c : random_cases(50, 11)) {
    const auto st = strengths(c.g, c.s);
    const auto gr = gradient(c.g, c.s);
    for (std::size_t i = 0; i < gr.size(); ++i) EXPECT_NEAR(st.residual[i], std::abs(gr[i]), 1e-12);
  }
}

TEST(Sync, Deviation) {
  EXPECT_EQ(aligned_deviation(PhaseState({0.4, 0.4, 0.4})), 0.0);
  EXPECT_NEAR(aligned_deviation(PhaseState({0.4 + 5.0, 0.4 + 5.0, 0.4 + 5.0})), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(aligned_deviation(PhaseState({0.0, kPi})), kPi);
  EXPECT_EQ(aligned_deviation(PhaseState({1.0})), 0.0);
  EXPECT_THROW(aligned_deviation(PhaseState()), std::invalid_argument);
  // Wrapping across the branch cut.
  EXPECT_NEAR(aligned_deviation(PhaseState({kPi - 1e-3, -kPi + 1e-3})), 1e-3, 1e-12);
  EXPECT_TRUE(is_synchronized(PhaseState({1.0, 1.0 + 2 * kPi}), 1e-9));
}

TEST(Sync, GaugeInvariance) {
  StreamRng rng(12, 0);
  for (int k = 0; k < 50; ++k) {
    const PhaseState s = random_state(6, rng);
    EXPECT_NEAR(aligned_deviation(s.shifted(rng.uniform(-10, 10))), aligned_deviation(s), 1e-12);
  }
}

TEST(Angles, Wrap) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-15);
}
