#pragma once

/// \file symmetric_eigen.hpp
/// Dense real symmetric eigensolver: Householder reduction to tridiagonal
/// form followed by implicit QL iteration with Wilkinson shifts.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gpsrad/orthopoly.hpp"

namespace gpsrad {

/// A dense matrix that is symmetric bit for bit, with finite entries.
template <std::floating_point Real>
class SymmetricMatrix {
public:
  explicit SymmetricMatrix(DenseMatrix<Real> m) : m_(std::move(m)) {
    if (m_.size() == 0) throw std::invalid_argument("SymmetricMatrix: dimension must be >= 1");
    for (std::size_t i = 0; i < m_.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        if (!std::isfinite(m_(i, j))) {
          throw std::invalid_argument("SymmetricMatrix: non-finite entry");
        }
        if (m_(i, j) != m_(j, i)) {
          throw std::invalid_argument("SymmetricMatrix: entries are not symmetric");
        }
      }
    }
  }

  std::size_t size() const noexcept { return m_.size(); }
  Real operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const DenseMatrix<Real>& dense() const noexcept { return m_; }

  Real frobenius_norm() const {
    Real s = 0;
    for (Real v : m_.data()) s += v * v;
    return std::sqrt(s);
  }

  Real trace() const {
    Real s = 0;
    for (std::size_t i = 0; i < size(); ++i) s += m_(i, i);
    return s;
  }

private:
  DenseMatrix<Real> m_;
};

/// Eigenvalues in ascending order; vector(k) is the unit eigenvector paired
/// with eigenvalues[k].
template <std::floating_point Real>
class EigenDecomposition {
public:
  EigenDecomposition(std::vector<Real> values, std::vector<Real> vectors_by_row)
      : values_(std::move(values)), vectors_(std::move(vectors_by_row)) {}

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Real>& eigenvalues() const noexcept { return values_; }
  std::span<const Real> vector(std::size_t k) const {
    return {vectors_.data() + k * size(), size()};
  }
  /// Component i of eigenvector k.
  Real operator()(std::size_t i, std::size_t k) const { return vectors_[k * size() + i]; }

private:
  std::vector<Real> values_;
  std::vector<Real> vectors_;
};

namespace detail {

// Householder tridiagonalisation (reduces from the last row upwards).
// On return, q holds the accumulated orthogonal transform (column-major in
// the sense q(k, i) = component k of basis vector i), d the diagonal and e
// the sub-diagonal with e[i] coupling d[i-1] and d[i].
template <std::floating_point Real>
void householder_tridiagonalize(DenseMatrix<Real>& q, std::vector<Real>& d,
                                std::vector<Real>& e) {
  const std::size_t n = q.size();
  d.assign(n, Real(0));
  e.assign(n, Real(0));
  for (std::size_t j = 0; j < n; ++j) d[j] = q(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    Real scale = 0;
    Real h = 0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == Real(0)) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = q(i - 1, j);
        q(i, j) = 0;
        q(j, i) = 0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      Real f = d[i - 1];
      Real g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        q(j, i) = f;
        g = e[j] + q(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += q(k, j) * d[k];
          e[k] += q(k, j) * f;
        }
        e[j] = g;
      }
      f = 0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const Real hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) q(k, j) -= (f * e[k] + g * d[k]);
        d[j] = q(i - 1, j);
        q(i, j) = 0;
      }
    }
    d[i] = h;
  }

  // accumulate the transformations
  for (std::size_t i = 0; i + 1 < n; ++i) {
    q(n - 1, i) = q(i, i);
    q(i, i) = 1;
    const Real h = d[i + 1];
    if (h != Real(0)) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = q(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        Real g = 0;
        for (std::size_t k = 0; k <= i; ++k) g += q(k, i + 1) * q(k, j);
        for (std::size_t k = 0; k <= i; ++k) q(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) q(k, i + 1) = 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = q(n - 1, j);
    q(n - 1, j) = 0;
  }
  q(n - 1, n - 1) = 1;
  e[0] = 0;
}

// Implicit QL with Wilkinson shifts on the tridiagonal (d, e), e[i] coupling
// d[i] and d[i+1]. z holds one basis vector per row; rows are rotated along.
template <std::floating_point Real>
void implicit_ql(std::vector<Real>& d, std::vector<Real>& e, DenseMatrix<Real>& z) {
  constexpr int kMaxIterations = 50;
  constexpr Real kEps = std::numeric_limits<Real>::epsilon();
  const std::size_t n = d.size();
  Real* zrow = n ? &z(0, 0) : nullptr;

  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const Real dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (++iterations > kMaxIterations) {
        throw ConvergenceError("eigh: QL iteration did not converge", l);
      }

      // Wilkinson shift from the leading 2x2 block
      Real g = (d[l + 1] - d[l]) / (2 * e[l]);
      Real r = std::hypot(g, Real(1));
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));

      Real s = 1, c = 1, p = 0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        Real f = s * e[i];
        const Real b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == Real(0)) {
          d[i + 1] -= p;
          e[m] = 0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;

        Real* zi = zrow + i * n;
        Real* zi1 = zrow + (i + 1) * n;
        for (std::size_t k = 0; k < n; ++k) {
          f = zi1[k];
          zi1[k] = s * zi[k] + c * f;
          zi[k] = c * zi[k] - s * f;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0;
    }
  }
}

}  // namespace detail

/// Full eigendecomposition of a symmetric matrix. Eigenvalues ascend; each
/// eigenvector has its first component of magnitude > 1e-8 made positive.
/// Deterministic: identical input gives identical bits.
template <std::floating_point Real>
EigenDecomposition<Real> eigh(const SymmetricMatrix<Real>& h) {
  const std::size_t n = h.size();
  DenseMatrix<Real> q = h.dense();
  std::vector<Real> d, e;
  detail::householder_tridiagonalize(q, d, e);

  // basis vectors as rows
  DenseMatrix<Real> z(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) z(i, k) = q(k, i);

  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0;
  detail::implicit_ql(d, e, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  std::vector<Real> values(n);
  std::vector<Real> vectors(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    values[k] = d[src];
    const Real* v = &z(src, 0);
    Real sign = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v[i]) > Real(1e-8)) {
        sign = v[i] < 0 ? Real(-1) : Real(1);
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) vectors[k * n + i] = sign * v[i];
  }
  return {std::move(values), std::move(vectors)};
}

/// ||H v - lambda v||_2.
template <std::floating_point Real>
Real eigenpair_residual(const SymmetricMatrix<Real>& h, Real lambda, std::span<const Real> v) {
  const std::size_t n = h.size();
  Real s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Real hv = 0;
    for (std::size_t j = 0; j < n; ++j) hv += h(i, j) * v[j];
    const Real r = hv - lambda * v[i];
    s += r * r;
  }
  return std::sqrt(s);
}

/// Quality figures for a decomposition, all absolute.
template <std::floating_point Real>
struct DecompositionQuality {
  Real max_residual = 0;             // max_k ||H v_k - lambda_k v_k||
  Real max_orthonormality_error = 0; // max_{j,k} |v_j . v_k - delta_jk|
  Real trace_error = 0;              // |sum lambda - trace H|
  Real frobenius_norm = 0;           // ||H||_F
};

template <std::floating_point Real>
DecompositionQuality<Real> assess(const SymmetricMatrix<Real>& h,
                                  const EigenDecomposition<Real>& dec) {
  const std::size_t n = h.size();
  DecompositionQuality<Real> q;
  q.frobenius_norm = h.frobenius_norm();
  for (std::size_t k = 0; k < n; ++k) {
    q.max_residual = std::max(q.max_residual,
                              eigenpair_residual(h, dec.eigenvalues()[k], dec.vector(k)));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto vj = dec.vector(j);
    for (std::size_t k = j; k < n; ++k) {
      const auto vk = dec.vector(k);
      Real dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += vj[i] * vk[i];
      const Real dev = std::abs(dot - (j == k ? Real(1) : Real(0)));
      q.max_orthonormality_error = std::max(q.max_orthonormality_error, dev);
    }
  }
  Real sum = 0;
  for (Real v : dec.eigenvalues()) sum += v;
  q.trace_error = std::abs(sum - h.trace());
  return q;
}

}  // namespace gpsrad
