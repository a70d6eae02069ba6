#pragma once

#include <array>
#include <cmath>

#include "rotloc/errors.hpp"

namespace rotloc {

struct CylindricalEvent {
  double r = 0.0;
  double phi = 0.0;
  double z = 0.0;
  double t = 0.0;
};

inline constexpr double kBoundaryEpsilon = 1e-12;

template <typename Real>
using Mat3 = std::array<std::array<Real, 3>, 3>;

// Linear map (phi, z, t) -> (phi~, z~, t~) at fixed r, as a 3x3 matrix.
template <typename Real>
Mat3<Real> transform_matrix(Real r, Real omega_n, Real boundary_eps = Real(kBoundaryEpsilon)) {
  const Real x2 = r * r * omega_n * omega_n;
  if (!(x2 < Real(1) - boundary_eps)) {
    throw DomainError("r^2 Omega^2 >= 1: the rotating frame requires r < lambda/2pi");
  }
  const Real g = std::sqrt(Real(1) - x2);
  const Real a = r * r * omega_n;
  return {{{Real(1), omega_n, -omega_n},
           {-a / g, g, a * omega_n / g},
           {-a / g, Real(0), Real(1) / g}}};
}

// The forward formulas written out term by term.
template <typename Real>
std::array<Real, 3> forward_map(Real r, Real omega_n, Real phi, Real z, Real t,
                                Real boundary_eps = Real(kBoundaryEpsilon)) {
  const Real x2 = r * r * omega_n * omega_n;
  if (!(x2 < Real(1) - boundary_eps)) {
    throw DomainError("r^2 Omega^2 >= 1: the rotating frame requires r < lambda/2pi");
  }
  const Real g = std::sqrt(Real(1) - x2);
  const Real phi_r = phi + z * omega_n - omega_n * t;
  const Real z_r = -r * r * omega_n * phi / g + z * g + x2 * t / g;
  const Real t_r = -r * r * omega_n * phi / g + t / g;
  return {phi_r, z_r, t_r};
}

template <typename Real>
std::array<Real, 3> apply(const Mat3<Real>& m, const std::array<Real, 3>& v) {
  std::array<Real, 3> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += m[i][j] * v[j];
  return out;
}

template <typename Real>
Real det3(const Mat3<Real>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

CylindricalEvent to_rotating(const CylindricalEvent& e, double omega_n,
                             double boundary_eps = kBoundaryEpsilon);

// Inverse map: adjugate of the unit-determinant matrix at fixed r.
CylindricalEvent from_rotating(const CylindricalEvent& e, double omega_n,
                               double boundary_eps = kBoundaryEpsilon);

// Analytic determinant of d(phi~, z~, t~)/d(phi, z, t). Row 2 minus row 3 is
// (0, g, -g), which keeps every term O(1) even as 1/g diverges.
double jacobian_det(const CylindricalEvent& e, double omega_n,
                    double boundary_eps = kBoundaryEpsilon);

// Central-difference Jacobian determinant, evaluated in long double.
double jacobian_det_fd(const CylindricalEvent& e, double omega_n, double step = 1.0,
                       double boundary_eps = kBoundaryEpsilon);

struct MaxRadius {
  double compton;      // 1/omega_n, equal to kappa
  double of_lambda;    // always 1/(2pi): r_max = lambda/2pi
};

MaxRadius max_radius(double omega_n);

// lambda/2pi for a physical wavelength (same length unit as the input).
double max_radius_physical(double wavelength);

}  // namespace rotloc
