#pragma once

/// \file potentials.hpp
/// Hellmann potential v(r) = -A/r + B exp(-C r)/r and the effective radial
/// potential with the centrifugal barrier.

#include <cmath>
#include <concepts>
#include <stdexcept>

namespace gpsrad {

/// Anything evaluable as a radial potential v(r) at r > 0, in Hartree.
template <typename P>
concept RadialPotential = requires(const P& p, double r) {
  { p(r) } -> std::convertible_to<double>;
};

/// Coulomb strength A > 0, Yukawa strength B (either sign), screening C >= 0.
class PotentialParams {
public:
  PotentialParams(double a, double b, double c) : a_(a), b_(b), c_(c) {
    if (!(a > 0)) throw std::invalid_argument("PotentialParams: A must be > 0");
    if (!(c >= 0)) throw std::invalid_argument("PotentialParams: C must be >= 0");
    if (!std::isfinite(b)) throw std::invalid_argument("PotentialParams: B must be finite");
  }

  double A() const noexcept { return a_; }
  double B() const noexcept { return b_; }
  double C() const noexcept { return c_; }

  friend bool operator==(const PotentialParams&, const PotentialParams&) = default;

private:
  double a_;
  double b_;
  double c_;
};

inline double hellmann(double r, const PotentialParams& params) {
  if (!(r > 0)) throw std::domain_error("hellmann: r must be > 0");
  return (-params.A() + params.B() * std::exp(-params.C() * r)) / r;
}

/// The Hellmann potential as a RadialPotential.
struct Hellmann {
  PotentialParams params;
  double operator()(double r) const { return hellmann(r, params); }
};

template <RadialPotential P>
double effective_potential(double r, const P& potential, int ell) {
  if (ell < 0) throw std::invalid_argument("effective_potential: ell must be >= 0");
  if (!(r > 0)) throw std::domain_error("effective_potential: r must be > 0");
  return potential(r) + ell * (ell + 1.0) / (2.0 * r * r);
}

inline double effective_potential(double r, const PotentialParams& params, int ell) {
  return effective_potential(r, Hellmann{params}, ell);
}

}  // namespace gpsrad
