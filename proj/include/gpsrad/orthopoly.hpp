#pragma once

/// \file orthopoly.hpp
/// Legendre polynomials, Legendre-Gauss-Lobatto (LGL) nodes and weights,
/// and the cardinal-function differentiation matrix on the LGL nodes.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpsrad {

/// Thrown when an iterative numerical procedure fails to converge.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (index " + std::to_string(index) + ")"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

/// Row-major dense square matrix. Just enough for the collocation operators.
template <std::floating_point Real>
class DenseMatrix {
public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n, Real fill = Real(0))
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  Real& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  const std::vector<Real>& data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<Real> data_;
};

template <std::floating_point Real>
struct LegendreValue {
  Real p;    // P_N(x)
  Real dp;   // P'_N(x)
  Real d2p;  // P''_N(x)
};

/// P_N, P'_N and P''_N at x in [-1, 1] via the three-term recurrence.
template <std::floating_point Real>
LegendreValue<Real> legendre_eval(int order, Real x) {
  if (order < 0) throw std::invalid_argument("legendre_eval: order must be >= 0");
  if (std::abs(x) > Real(1)) {
    throw std::invalid_argument("legendre_eval: |x| must be <= 1");
  }
  if (order == 0) return {Real(1), Real(0), Real(0)};

  Real p_prev = Real(1);
  Real p = x;
  for (int k = 2; k <= order; ++k) {
    const Real p_next = ((2 * k - 1) * x * p - (k - 1) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }

  const Real n = static_cast<Real>(order);
  const Real nn1 = n * (n + 1);
  if (std::abs(x) == Real(1)) {
    // P_N(+-1) = (+-1)^N, P'_N(+-1) = (+-1)^(N-1) N(N+1)/2,
    // P''_N(+-1) = (+-1)^N (N-1)N(N+1)(N+2)/8.
    const Real sign_n = (x < 0 && order % 2 == 1) ? Real(-1) : Real(1);
    const Real sign_n1 = (x < 0 && order % 2 == 0) ? Real(-1) : Real(1);
    return {sign_n, sign_n1 * nn1 / 2, sign_n * (n - 1) * nn1 * (n + 2) / 8};
  }
  const Real one_minus_x2 = (1 - x) * (1 + x);
  const Real dp = n * (p_prev - x * p) / one_minus_x2;
  const Real d2p = (2 * x * dp - nn1 * p) / one_minus_x2;
  return {p, dp, d2p};
}

/// LGL nodes, quadrature weights and first-derivative matrix of order N.
template <std::floating_point Real>
struct CollocationGrid {
  int order = 0;
  std::vector<Real> nodes;    // x_0 = -1 < ... < x_N = +1
  std::vector<Real> weights;  // w_j > 0, sum 2
  std::vector<Real> p_at_nodes;
  DenseMatrix<Real> diff_matrix;

  std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

// Newton iteration on P'_N starting from a Chebyshev-Lobatto guess.
template <std::floating_point Real>
Real lgl_interior_root(int order, int j) {
  constexpr int kMaxIterations = 100;
  constexpr Real kTolerance = Real(1e-15);
  Real x = -std::cos(std::numbers::pi_v<Real> * j / order);
  for (int it = 0; it < kMaxIterations; ++it) {
    const auto v = legendre_eval(order, x);
    const Real step = v.dp / v.d2p;
    x -= step;
    if (std::abs(step) <= kTolerance) {
      // one polishing step past the tolerance
      const auto w = legendre_eval(order, x);
      return x - w.dp / w.d2p;
    }
  }
  throw ConvergenceError("lgl_grid: Newton iteration for P'_N root did not converge",
                         static_cast<std::size_t>(j));
}

}  // namespace detail

/// Builds the order-N LGL grid: x_0 = -1, x_N = +1 and the N-1 roots of P'_N.
/// The nodes are exactly antisymmetric about zero (the upper half mirrors the
/// lower half).
template <std::floating_point Real>
CollocationGrid<Real> lgl_grid(int order) {
  if (order < 2) throw std::invalid_argument("lgl_grid: order must be >= 2");
  const auto n_nodes = static_cast<std::size_t>(order) + 1;
  const auto N = static_cast<std::size_t>(order);

  CollocationGrid<Real> grid;
  grid.order = order;
  grid.nodes.assign(n_nodes, Real(0));
  grid.nodes.front() = Real(-1);
  grid.nodes.back() = Real(1);
  for (std::size_t j = 1; 2 * j < N; ++j) {
    const Real x = detail::lgl_interior_root<Real>(order, static_cast<int>(j));
    grid.nodes[j] = x;
    grid.nodes[N - j] = -x;
  }
  // even N: x_{N/2} = 0 is a root of P'_N by parity

  const Real nn1 = static_cast<Real>(order) * (order + 1);
  grid.p_at_nodes.resize(n_nodes);
  grid.weights.resize(n_nodes);
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const Real p = legendre_eval(order, grid.nodes[j]).p;
    grid.p_at_nodes[j] = p;
    grid.weights[j] = 2 / (nn1 * p * p);
  }

  auto& D = grid.diff_matrix;
  D = DenseMatrix<Real>(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t j = 0; j < n_nodes; ++j) {
      if (i == j) continue;
      D(i, j) = grid.p_at_nodes[i] /
                (grid.p_at_nodes[j] * (grid.nodes[i] - grid.nodes[j]));
    }
  }
  D(0, 0) = -nn1 / 4;
  D(N, N) = nn1 / 4;
  return grid;
}

/// Cardinal function g_j(x) = -(1-x^2) P'_N(x) / (N(N+1) P_N(x_j) (x - x_j)).
/// At x = x_j the removable singularity is resolved to its limit, 1.
template <std::floating_point Real>
Real cardinal(const CollocationGrid<Real>& grid, std::size_t j, Real x) {
  const Real xj = grid.nodes.at(j);
  if (x == xj) return Real(1);
  const Real nn1 = static_cast<Real>(grid.order) * (grid.order + 1);
  const auto v = legendre_eval(grid.order, x);
  return -((1 - x) * (1 + x) * v.dp) / (nn1 * grid.p_at_nodes[j] * (x - xj));
}

}  // namespace gpsrad
