#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qtsync/energy.hpp"

namespace qtsync {

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 100;
  int max_halvings = 30;
};

class NewtonFailure : public std::runtime_error {
 public:
  NewtonFailure(PhaseState last, double residual)
      : std::runtime_error("Newton refinement did not converge (residual " + std::to_string(residual) + ")"),
        last_iterate(std::move(last)),
        residual(residual) {}

  PhaseState last_iterate;
  double residual;
};

// Damped Newton solve of grad E = 0 with theta_0 held fixed. Each step is
// halved until either the gradient norm or the energy decreases; after
// max_halvings failures a plain gradient step is taken instead.
inline PhaseState refine_newton(const Graph& g, const PhaseState& s, const NewtonOptions& opts = {}) {
  detail::check_length(g, s);
  PhaseState x = s;
  double residual = gradient_norm(g, x);
  if (residual <= opts.tol || g.n() <= 1) return x;

  const auto m = static_cast<Eigen::Index>(g.n()) - 1;
  std::size_t max_deg = 1;
  for (Vertex v = 0; v < g.n(); ++v) max_deg = std::max(max_deg, g.degree(v));

  for (int it = 0; it < opts.max_iterations; ++it) {
    const auto grad = gradient(g, x);
    const Eigen::MatrixXd h = hessian(g, x).bottomRightCorner(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index k = 0; k < m; ++k) rhs(k) = -grad[static_cast<std::size_t>(k) + 1];
    const Eigen::VectorXd step = h.completeOrthogonalDecomposition().solve(rhs);

    const double e0 = energy(g, x);
    bool accepted = false;
    double alpha = 1.0;
    PhaseState trial = x;
    for (int k = 0; k < opts.max_halvings && step.allFinite(); ++k, alpha *= 0.5) {
      for (Eigen::Index i = 0; i < m; ++i) {
        trial.theta[static_cast<std::size_t>(i) + 1] = x.theta[static_cast<std::size_t>(i) + 1] + alpha * step(i);
      }
      const double r = gradient_norm(g, trial);
      if (r < residual || energy(g, trial) < e0) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      const double eta = 0.5 / static_cast<double>(max_deg);
      trial = x;
      for (std::size_t i = 1; i < g.n(); ++i) trial.theta[i] -= eta * grad[i];
    }
    x = std::move(trial);
    residual = gradient_norm(g, x);
    if (residual <= opts.tol) return x;
  }
  throw NewtonFailure(x, residual);
}

inline PhaseState refine_newton(const Graph& g, const PhaseState& s, double tol) {
  NewtonOptions o;
  o.tol = tol;
  return refine_newton(g, s, o);
}

}  // namespace qtsync
