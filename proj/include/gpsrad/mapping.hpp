#pragma once

/// \file mapping.hpp
/// Algebraic map r(x) = L (1 + x) / (1 - x + alpha) from [-1, 1] onto
/// [0, r_max], with L = alpha r_max / 2.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gpsrad/orthopoly.hpp"

namespace gpsrad {

template <std::floating_point Real>
class MapParams {
public:
  MapParams(Real r_max, Real alpha) : r_max_(r_max), alpha_(alpha) {
    if (!(r_max > 0)) throw std::invalid_argument("MapParams: r_max must be > 0");
    if (!(alpha > 0)) throw std::invalid_argument("MapParams: alpha must be > 0");
  }

  Real r_max() const noexcept { return r_max_; }
  Real alpha() const noexcept { return alpha_; }
  Real length() const noexcept { return alpha_ * r_max_ / 2; }

private:
  Real r_max_;
  Real alpha_;
};

template <std::floating_point Real>
struct MapValue {
  Real r, dr, d2r, d3r;
};

template <std::floating_point Real>
MapValue<Real> map_point(Real x, const MapParams<Real>& params) {
  if (std::abs(x) > Real(1)) throw std::invalid_argument("map_point: |x| must be <= 1");
  const Real L = params.length();
  const Real a = params.alpha();
  const Real denom = 1 - x + a;
  const Real c = L * (2 + a);
  const Real d2 = denom * denom;
  // x = +1 is pinned so that r_N equals r_max bit for bit
  const Real r = (x == Real(1)) ? params.r_max() : L * (1 + x) / denom;
  return {r, c / d2, 2 * c / (d2 * denom), 6 * c / (d2 * d2)};
}

/// Map-induced potential term [3 (r'')^2 - 2 r''' r'] / [8 (r')^4].
///
/// For the algebraic map the numerator cancels identically:
/// 3 (2c/u^3)^2 = 12 c^2/u^6 = 2 (6c/u^4)(c/u^2) with c = L(2 + alpha),
/// u = 1 - x + alpha. The cancellation is evaluated on the exact coefficient
/// polynomial in c so the result is exactly zero rather than a rounding
/// residue of two nearly equal terms.
template <std::floating_point Real>
Real vm_term(Real x, const MapParams<Real>& params) {
  if (std::abs(x) > Real(1)) throw std::invalid_argument("vm_term: |x| must be <= 1");
  const Real c = params.length() * (2 + params.alpha());
  const Real u = 1 - x + params.alpha();
  // numerator in units of c^2 / u^6: 3 * 2^2 - 2 * 6 * 1
  constexpr int kNumeratorCoefficient = 3 * (2 * 2) - 2 * (6 * 1);
  static_assert(kNumeratorCoefficient == 0);
  const Real dr = c / (u * u);
  return Real(kNumeratorCoefficient) * c * c / (u * u * u * u * u * u) /
         (8 * dr * dr * dr * dr);
}

template <std::floating_point Real>
struct MappedGrid {
  CollocationGrid<Real> base;
  MapParams<Real> params;
  std::vector<Real> r;       // r(x_j)
  std::vector<Real> rprime;  // r'(x_j)

  std::size_t size() const noexcept { return r.size(); }
};

template <std::floating_point Real>
MappedGrid<Real> make_mapped_grid(CollocationGrid<Real> base, MapParams<Real> params) {
  const std::size_t n = base.size();
  std::vector<Real> r(n), rp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto m = map_point(base.nodes[j], params);
    r[j] = m.r;
    rp[j] = m.dr;
  }
  return {std::move(base), params, std::move(r), std::move(rp)};
}

template <std::floating_point Real>
MappedGrid<Real> make_mapped_grid(int order, Real r_max, Real alpha) {
  return make_mapped_grid(lgl_grid<Real>(order), MapParams<Real>(r_max, alpha));
}

}  // namespace gpsrad
