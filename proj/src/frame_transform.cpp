#include "rotloc/frame_transform.hpp"

#include <numbers>

namespace rotloc {

CylindricalEvent to_rotating(const CylindricalEvent& e, double omega_n, double boundary_eps) {
  if (e.r < 0.0) throw DomainError("r must be non-negative");
  const auto v = forward_map(e.r, omega_n, e.phi, e.z, e.t, boundary_eps);
  return {e.r, v[0], v[1], v[2]};
}

CylindricalEvent from_rotating(const CylindricalEvent& e, double omega_n, double boundary_eps) {
  if (e.r < 0.0) throw DomainError("r must be non-negative");
  const auto m = transform_matrix(e.r, omega_n, boundary_eps);
  Mat3<double> inv{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      inv[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  const auto v = apply(inv, std::array<double, 3>{e.phi, e.z, e.t});
  return {e.r, v[0], v[1], v[2]};
}

double jacobian_det(const CylindricalEvent& e, double omega_n, double boundary_eps) {
  auto m = transform_matrix(e.r, omega_n, boundary_eps);
  const double g = m[1][1];
  m[1] = {0.0, g, -g};
  return det3(m);
}

double jacobian_det_fd(const CylindricalEvent& e, double omega_n, double step,
                       double boundary_eps) {
  using LD = long double;
  const LD r = e.r, w = omega_n, eps = boundary_eps;
  const std::array<LD, 3> base{e.phi, e.z, e.t};
  auto f = [&](const std::array<LD, 3>& v) { return forward_map(r, w, v[0], v[1], v[2], eps); };
  Mat3<LD> jac{};
  for (int j = 0; j < 3; ++j) {
    auto plus = base, minus = base;
    plus[j] += step;
    minus[j] -= step;
    const auto fp = f(plus);
    const auto fm = f(minus);
    for (int i = 0; i < 3; ++i) jac[i][j] = (fp[i] - fm[i]) / (2 * LD(step));
  }
  return static_cast<double>(det3(jac));
}

MaxRadius max_radius(double omega_n) {
  if (!(omega_n > 0.0)) throw DomainError("omega_n must be positive");
  return {1.0 / omega_n, 1.0 / (2.0 * std::numbers::pi)};
}

double max_radius_physical(double wavelength) {
  return wavelength / (2.0 * std::numbers::pi);
}

}  // namespace rotloc
