#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtsync/graph.hpp"

namespace qtsync {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Maps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

inline double circular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

// Oscillator angles in radians. Values are kept unwrapped during computation;
// canonical() wraps for output.
struct PhaseState {
  std::vector<double> theta;

  PhaseState() = default;
  explicit PhaseState(std::vector<double> t) : theta(std::move(t)) {}

  std::size_t size() const { return theta.size(); }
  Vec2 phasor(std::size_t i) const { return unit(theta[i]); }

  PhaseState shifted(double c) const {
    PhaseState s = *this;
    for (auto& t : s.theta) t += c;
    return s;
  }

  PhaseState canonical() const {
    PhaseState s = *this;
    for (auto& t : s.theta) t = wrap_angle(t);
    return s;
  }
};

// Numerical thresholds shared by the classification pipeline.
struct Tolerances {
  double grad = 1e-10;  // stationarity: ||grad||_2
  double eig = 1e-8;    // PSD slack on the restricted Hessian spectrum
  double sync = 1e-6;   // max angular deviation counted as synchronized
  double zero = 1e-7;   // norm below which a phasor sum is treated as the zero vector
};

namespace detail {

inline void check_length(const Graph& g, const PhaseState& s) {
  if (s.size() != g.n()) {
    throw std::invalid_argument("state has " + std::to_string(s.size()) + " angles but graph has " +
                                std::to_string(g.n()) + " vertices");
  }
}

}  // namespace detail

// E(theta) = sum over edges of (1 - cos(theta_i - theta_j)). This is half the
// ordered double sum; the other common normalisation differs only by scale
// and an additive constant, so stationary points and minimisers coincide.
inline double energy(const Graph& g, const PhaseState& s) {
  detail::check_length(g, s);
  double e = 0.0;
  for (auto [i, j] : g.edges()) e += 1.0 - std::cos(s.theta[i] - s.theta[j]);
  return e;
}

// grad_j = sum_i A_ij sin(theta_j - theta_i)
inline std::vector<double> gradient(const Graph& g, const PhaseState& s) {
  detail::check_length(g, s);
  std::vector<double> grad(g.n(), 0.0);
  for (auto [i, j] : g.edges()) {
    const double w = std::sin(s.theta[j] - s.theta[i]);
    grad[j] += w;
    grad[i] -= w;
  }
  return grad;
}

inline double gradient_norm(const Graph& g, const PhaseState& s) {
  double acc = 0.0;
  for (double x : gradient(g, s)) acc += x * x;
  return std::sqrt(acc);
}

// Right-hand side of the homogeneous Kuramoto model, d theta/dt = -grad E.
inline std::vector<double> kuramoto_rhs(const Graph& g, const PhaseState& s) {
  auto r = gradient(g, s);
  for (auto& x : r) x = -x;
  return r;
}

// Off-diagonal -A_ij cos(theta_i - theta_j); diagonal sum_k A_ik cos(theta_i - theta_k).
// Rows sum to zero at every state.
inline Eigen::MatrixXd hessian(const Graph& g, const PhaseState& s) {
  detail::check_length(g, s);
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges()) {
    const double c = std::cos(s.theta[i] - s.theta[j]);
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    h(a, b) -= c;
    h(b, a) -= c;
    h(a, a) += c;
    h(b, b) += c;
  }
  return h;
}

inline Eigen::MatrixXd laplacian(const Graph& g) {
  return hessian(g, PhaseState(std::vector<double>(g.n(), 0.0)));
}

struct Strengths {
  std::vector<double> mu;        // mu_i = sum_{j in N(i)} cos(theta_j - theta_i)
  std::vector<double> residual;  // || sum_{j in N(i)} v_j - mu_i v_i ||
  std::vector<Vec2> neighbor_sum;

  double max_residual() const {
    double r = 0.0;
    for (double x : residual) r = std::max(r, x);
    return r;
  }
};

// The residual vanishes at node i exactly when the gradient component does:
// it equals |sum_j sin(theta_j - theta_i)|.
inline Strengths strengths(const Graph& g, const PhaseState& s) {
  detail::check_length(g, s);
  Strengths out;
  out.mu.resize(g.n());
  out.residual.resize(g.n());
  out.neighbor_sum.resize(g.n());
  for (Vertex i = 0; i < g.n(); ++i) {
    Vec2 sum;
    for (Vertex j : g.neighbors(i)) sum += s.phasor(j);
    const Vec2 vi = s.phasor(i);
    const double mu = dot(sum, vi);
    out.mu[i] = mu;
    out.neighbor_sum[i] = sum;
    out.residual[i] = norm(sum - mu * vi);
  }
  return out;
}

inline Vec2 phasor_sum(const PhaseState& s, const std::vector<Vertex>& nodes) {
  Vec2 sum;
  for (Vertex v : nodes) sum += s.phasor(v);
  return sum;
}

// Largest angular distance to the circular mean direction. A vanishing mean
// with two or more oscillators reports pi.
inline double aligned_deviation(const PhaseState& s) {
  if (s.size() == 0) throw std::invalid_argument("aligned_deviation of an empty state");
  if (s.size() == 1) return 0.0;
  Vec2 mean;
  for (std::size_t i = 0; i < s.size(); ++i) mean += s.phasor(i);
  if (norm(mean) <= 1e-12 * static_cast<double>(s.size())) return kPi;
  const double dir = std::atan2(mean.y, mean.x);
  double dev = 0.0;
  for (double t : s.theta) dev = std::max(dev, circular_distance(t, dir));
  return dev;
}

inline bool is_synchronized(const PhaseState& s, double tol) { return aligned_deviation(s) <= tol; }

// Gauge-fixed copy: rotated so the circular mean points along angle 0.
inline PhaseState aligned(const PhaseState& s) {
  Vec2 mean;
  for (std::size_t i = 0; i < s.size(); ++i) mean += s.phasor(i);
  const double dir = norm(mean) > 0.0 ? std::atan2(mean.y, mean.x) : s.theta.front();
  PhaseState out = s;
  for (auto& t : out.theta) t = wrap_angle(t - dir);
  return out;
}

}  // namespace qtsync
