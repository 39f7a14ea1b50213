#pragma once

/// \file solver.hpp
/// Generalized pseudospectral (GPS) solver for the radial Schroedinger
/// equation  [-1/2 d^2/dr^2 + l(l+1)/(2r^2) + v(r)] psi = E psi  on the
/// mapped LGL grid, with psi(0) = psi(r_max) = 0.
///
/// The discrete Hamiltonian is the collocation form of
/// -1/2 (1/r') d/dx (1/r') d/dx on the interior nodes, symmetrised by the
/// quadrature metric diag(w_j r'_j):
///
///   H_ij = 1/2 sum_k (w_k / r'_k) D_ki D_kj / sqrt(w_i r'_i w_j r'_j)
///          + delta_ij [v_eff(r_i) + v_m(x_i)]
///
/// so that H c = E c with c_i = sqrt(w_i r'_i) psi(r_i).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gpsrad/mapping.hpp"
#include "gpsrad/orthopoly.hpp"
#include "gpsrad/potentials.hpp"
#include "gpsrad/symmetric_eigen.hpp"

namespace gpsrad {

struct SolveConfig {
  int order = 200;
  double r_max = 200.0;
  double alpha = 25.0;
  int ell = 0;
  int num_states = 5;
  bool bound_only = true;

  void validate() const {
    if (order < 2) throw std::invalid_argument("SolveConfig: order must be >= 2");
    if (!(r_max > 0)) throw std::invalid_argument("SolveConfig: r_max must be > 0");
    if (!(alpha > 0)) throw std::invalid_argument("SolveConfig: alpha must be > 0");
    if (ell < 0) throw std::invalid_argument("SolveConfig: ell must be >= 0");
    if (num_states < 1) throw std::invalid_argument("SolveConfig: num_states must be >= 1");
    if (num_states > order - 1) {
      throw std::invalid_argument("SolveConfig: num_states must be <= order - 1");
    }
  }

  friend bool operator==(const SolveConfig&, const SolveConfig&) = default;
};

/// Probability mass beyond this fraction of r_max counts as the tail.
inline constexpr double kTailFraction = 0.9;
/// Tail mass above which a state is flagged as limited by the box size.
inline constexpr double kBoxLimitedTail = 1e-8;

struct BoundState {
  int n = 0;
  int ell = 0;
  double energy = 0.0;       // Hartree
  std::vector<double> psi;   // reduced radial function r R(r) on interior nodes
  int nodes_count = 0;
  double residual = 0.0;     // ||H c - E c||
  double tail_weight = 0.0;
  bool box_limited = false;
};

struct Spectrum {
  SolveConfig config;
  MappedGrid<double> grid;
  std::vector<BoundState> states;  // ascending energy
  int discarded = 0;               // eigenvalues dropped by the bound-state filter
  int shortfall = 0;               // requested minus returned states
  DecompositionQuality<double> quality;

  /// State with principal label n, if it was returned.
  const BoundState* find(int n) const {
    for (const auto& s : states) {
      if (s.n == n) return &s;
    }
    return nullptr;
  }
};

/// Kinetic part of the symmetrised Hamiltonian on interior nodes 1..N-1.
inline DenseMatrix<double> kinetic_matrix(const MappedGrid<double>& grid) {
  const auto& g = grid.base;
  const std::size_t N = static_cast<std::size_t>(g.order);
  const std::size_t dim = N - 1;
  const auto& D = g.diff_matrix;

  std::vector<double> metric(N + 1), inv_scale(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    metric[k] = g.weights[k] / grid.rprime[k];
    inv_scale[k] = 1.0 / std::sqrt(g.weights[k] * grid.rprime[k]);
  }
  // column-major copy of D for contiguous dot products over k
  DenseMatrix<double> dt(N + 1);
  for (std::size_t k = 0; k <= N; ++k)
    for (std::size_t i = 0; i <= N; ++i) dt(i, k) = D(k, i) * std::sqrt(metric[k]);

  DenseMatrix<double> kin(dim);
  for (std::size_t i = 1; i < N; ++i) {
    const double* di = &dt(i, 0);
    for (std::size_t j = i; j < N; ++j) {
      const double* dj = &dt(j, 0);
      double s = 0.0;
      for (std::size_t k = 0; k <= N; ++k) s += di[k] * dj[k];
      const double v = 0.5 * s * inv_scale[i] * inv_scale[j];
      kin(i - 1, j - 1) = v;
      kin(j - 1, i - 1) = v;
    }
  }
  return kin;
}

/// Potential diagonal v_eff(r_i) + v_m(x_i) on interior nodes.
template <RadialPotential P>
std::vector<double> potential_diagonal(const MappedGrid<double>& grid, const P& potential,
                                       int ell) {
  const std::size_t N = static_cast<std::size_t>(grid.base.order);
  std::vector<double> v(N - 1);
  for (std::size_t i = 1; i < N; ++i) {
    v[i - 1] = effective_potential(grid.r[i], potential, ell) +
               vm_term(grid.base.nodes[i], grid.params);
  }
  return v;
}

template <RadialPotential P>
SymmetricMatrix<double> assemble_hamiltonian(const MappedGrid<double>& grid,
                                             const P& potential, int ell) {
  auto h = kinetic_matrix(grid);
  const auto v = potential_diagonal(grid, potential, ell);
  for (std::size_t i = 0; i < v.size(); ++i) h(i, i) += v[i];
  return SymmetricMatrix<double>(std::move(h));
}

inline SymmetricMatrix<double> assemble_hamiltonian(const MappedGrid<double>& grid,
                                                    const PotentialParams& params, int ell) {
  return assemble_hamiltonian(grid, Hellmann{params}, ell);
}

/// Sign changes of v, skipping entries below rel_floor * max|v|. Deeply
/// bound states carry a smooth discretisation tail of order 1e-9 relative
/// amplitude in the forbidden region, which must not count as a node; a
/// lobe below the floor holds less than ~1e-12 of the probability.
inline int count_sign_changes(std::span<const double> v, double rel_floor = 1e-6) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double floor = rel_floor * vmax;
  int changes = 0;
  int last_sign = 0;
  for (double x : v) {
    if (std::abs(x) <= floor) continue;
    const int s = x > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++changes;
    last_sign = s;
  }
  return changes;
}

/// sum_j w_j r'_j f_j over interior nodes (f indexed from node 1).
inline double interior_quadrature(const MappedGrid<double>& grid, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += grid.base.weights[i + 1] * grid.rprime[i + 1] * f[i];
  }
  return s;
}

template <RadialPotential P>
Spectrum solve(const SolveConfig& config, const P& potential) {
  config.validate();
  Spectrum out{config, make_mapped_grid<double>(config.order, config.r_max, config.alpha),
               {}, 0, 0, {}};
  const auto& grid = out.grid;
  const auto h = assemble_hamiltonian(grid, potential, config.ell);
  const auto dec = eigh(h);
  out.quality = assess(h, dec);

  const std::size_t dim = h.size();
  std::vector<double> inv_scale(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    inv_scale[i] = 1.0 / std::sqrt(grid.base.weights[i + 1] * grid.rprime[i + 1]);
  }

  for (std::size_t k = 0; k < dim; ++k) {
    if (out.states.size() == static_cast<std::size_t>(config.num_states)) break;
    const double e = dec.eigenvalues()[k];
    if (config.bound_only && !(e < 0.0)) continue;
    const auto c = dec.vector(k);
    BoundState s;
    s.ell = config.ell;
    s.energy = e;
    s.psi.resize(dim);
    std::vector<double> psi_sq(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      s.psi[i] = c[i] * inv_scale[i];
      psi_sq[i] = s.psi[i] * s.psi[i];
    }
    const double norm = std::sqrt(interior_quadrature(grid, psi_sq));
    for (double& p : s.psi) p /= norm;

    s.nodes_count = count_sign_changes(c);
    s.n = config.ell + 1 + s.nodes_count;
    s.residual = eigenpair_residual(h, e, c);

    double tail = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      if (grid.r[i + 1] > kTailFraction * config.r_max) {
        tail += grid.base.weights[i + 1] * grid.rprime[i + 1] * s.psi[i] * s.psi[i];
      }
    }
    s.tail_weight = tail;
    s.box_limited = tail > kBoxLimitedTail;
    out.states.push_back(std::move(s));
  }
  if (config.bound_only) {
    out.discarded = static_cast<int>(std::count_if(
        dec.eigenvalues().begin(), dec.eigenvalues().end(), [](double e) { return !(e < 0.0); }));
  }
  out.shortfall = config.num_states - static_cast<int>(out.states.size());
  return out;
}

inline Spectrum solve(const SolveConfig& config, const PotentialParams& params) {
  return solve(config, Hellmann{params});
}

/// Radial probability density psi(r_j)^2 at the interior nodes, as (r, psi^2).
inline std::vector<std::pair<double, double>> density(const BoundState& state,
                                                      const MappedGrid<double>& grid) {
  if (state.psi.size() + 2 != grid.size()) {
    throw std::invalid_argument("density: state does not belong to this grid");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(state.psi.size());
  for (std::size_t i = 0; i < state.psi.size(); ++i) {
    out.emplace_back(grid.r[i + 1], state.psi[i] * state.psi[i]);
  }
  return out;
}

/// Quadrature integral of a density over r.
inline double integrate_density(const std::vector<std::pair<double, double>>& rho,
                                const MappedGrid<double>& grid) {
  std::vector<double> f(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) f[i] = rho[i].second;
  return interior_quadrature(grid, f);
}

/// Number of significant digits on which two values agree, in [0, 16].
inline int stable_digits(double previous, double current) {
  const double diff = std::abs(current - previous);
  const double scale = std::max(std::abs(current), std::abs(previous));
  if (diff == 0.0) return 16;
  if (scale == 0.0) return 0;
  const double d = std::floor(-std::log10(diff / scale));
  return static_cast<int>(std::clamp(d, 0.0, 16.0));
}

struct ConvergenceRow {
  int order = 0;
  std::vector<std::optional<double>> energies;      // per requested n
  std::vector<std::optional<int>> stability_digits; // vs the previous order
};

struct ConvergenceTable {
  std::vector<int> principal_numbers;
  std::vector<ConvergenceRow> rows;
};

/// Energies of the requested states (principal labels at the template's ell)
/// for each order, with the digits that stay fixed between consecutive orders.
template <RadialPotential P>
ConvergenceTable converge_study(SolveConfig base, const P& potential,
                                const std::vector<int>& orders,
                                const std::vector<int>& principal_numbers) {
  if (orders.empty()) throw std::invalid_argument("converge_study: no orders given");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 20) throw std::invalid_argument("converge_study: orders must be >= 20");
    if (i > 0 && orders[i] <= orders[i - 1]) {
      throw std::invalid_argument("converge_study: orders must be ascending");
    }
  }
  int max_n = base.ell + 1;
  for (int n : principal_numbers) {
    if (n <= base.ell) throw std::invalid_argument("converge_study: need n > ell");
    max_n = std::max(max_n, n);
  }
  base.num_states = max_n - base.ell;

  ConvergenceTable table{principal_numbers, {}};
  for (int order : orders) {
    SolveConfig cfg = base;
    cfg.order = order;
    cfg.num_states = std::min(base.num_states, order - 1);
    const auto spec = solve(cfg, potential);
    ConvergenceRow row;
    row.order = order;
    for (std::size_t s = 0; s < principal_numbers.size(); ++s) {
      const auto* st = spec.find(principal_numbers[s]);
      row.energies.push_back(st ? std::optional<double>(st->energy) : std::nullopt);
      std::optional<int> digits;
      if (!table.rows.empty() && row.energies[s] && table.rows.back().energies[s]) {
        digits = stable_digits(*table.rows.back().energies[s], *row.energies[s]);
      }
      row.stability_digits.push_back(digits);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline ConvergenceTable converge_study(const SolveConfig& base, const PotentialParams& params,
                                       const std::vector<int>& orders,
                                       const std::vector<int>& principal_numbers) {
  return converge_study(base, Hellmann{params}, orders, principal_numbers);
}

}  // namespace gpsrad
