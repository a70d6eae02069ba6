#include "rotloc/params.hpp"

#include <cmath>
#include <string>

#include "rotloc/errors.hpp"

namespace rotloc {
namespace {

void check_input(const PhysicalInput& in) {
  if (!(in.omega > 0.0) || !std::isfinite(in.omega)) {
    throw DomainError("omega must be positive and finite");
  }
  if (!(in.mass > 0.0) || !std::isfinite(in.mass)) {
    throw DomainError("mass must be positive and finite");
  }
  if (in.charge_sign != -1 && in.charge_sign != 1) {
    throw DomainError("charge_sign must be -1 or +1");
  }
}

}  // namespace

double magnetic_moment(double mass, int charge_sign) {
  return charge_sign * cgs::elementary_charge * cgs::hbar / (2.0 * mass * cgs::c);
}

ModelParams normalize(const PhysicalInput& in) {
  check_input(in);
  const double rest = in.mass * cgs::c * cgs::c;
  const double omega_n = cgs::hbar * in.omega / rest;
  const double mu = magnetic_moment(in.mass, in.charge_sign);
  const double e0 = -2.0 * mu * in.h_z / (cgs::hbar * in.omega);
  if (!(e0 > 0.0)) {
    throw DomainError(
        "e0 = -2 mu H_z / (hbar omega) = " + std::to_string(e0) +
        " is not positive; reverse the constant field direction (or the wave "
        "polarization together with the charge sign) so that e0 > 0");
  }
  // Both H/Omega and the resonance ratio scale as |e| H / (m c omega).
  const double h = cgs::elementary_charge * std::abs(in.h_wave) / (in.mass * cgs::c * in.omega);
  return make_params(e0, h, omega_n, +1);
}

PhysicalInput denormalize(const ModelParams& params, double mass, int charge_sign) {
  PhysicalInput out;
  out.mass = mass;
  out.charge_sign = charge_sign;
  out.omega = params.omega_n * mass * cgs::c * cgs::c / cgs::hbar;
  const double mu = magnetic_moment(mass, charge_sign);
  out.h_z = -params.e0 * cgs::hbar * out.omega / (2.0 * mu);
  out.h_wave = params.h * mass * cgs::c * out.omega / cgs::elementary_charge;
  return out;
}

ModelParams make_params(double e0, double h, double omega_n, int branch) {
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  if (!(omega_n > 0.0)) throw DomainError("omega_n must be positive");
  if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
  ModelParams m;
  m.omega_n = omega_n;
  m.h = h;
  m.e0 = e0;
  m.d = omega_n * e0 / 2.0;
  m.d2 = branch * std::sqrt(e0 * e0 + 1.0) / 2.0;
  m.p = singular_momentum(e0, omega_n);
  m.energy = singular_energy(e0, omega_n);
  m.kappa = 1.0 / omega_n;
  m.branch = branch;
  m.h_large = std::abs(h) >= kLargeH;
  return m;
}

double singular_momentum(double e0, double omega_n) {
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  return 0.5 * (1.0 / e0 - e0) + 0.5 * omega_n;
}

double singular_energy(double e0, double omega_n) {
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  return 0.5 * (1.0 / e0 + e0) + 0.5 * omega_n;
}

}  // namespace rotloc
