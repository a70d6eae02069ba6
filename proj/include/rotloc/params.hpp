#pragma once

// Unit normalization between CGS inputs and the dimensionless (Compton-unit)
// model parameters consumed by every other module.

namespace rotloc {

namespace cgs {
// CODATA 2018, Gaussian units.
inline constexpr double hbar = 1.054571817e-27;           // erg s
inline constexpr double c = 2.99792458e10;                // cm / s
inline constexpr double electron_mass = 9.1093837015e-28;  // g
inline constexpr double elementary_charge = 4.803204712570263e-10;  // statC
inline constexpr double bohr_magneton = 9.2740100783e-21;  // erg / G
}  // namespace cgs

struct PhysicalInput {
  double omega = 0.0;   // rad / s
  double h_z = 0.0;     // G, signed
  double h_wave = 0.0;  // G, amplitude
  double mass = cgs::electron_mass;
  int charge_sign = -1;
};

struct ModelParams {
  double omega_n = 0.0;  // Omega * lambdabar / c
  double h = 0.0;        // H / Omega
  double e0 = 1.0;
  double d = 0.0;        // omega_n * e0 / 2
  double d2 = 0.0;
  double p = 0.0;
  double energy = 0.0;
  double kappa = 0.0;    // 1 / omega_n
  int branch = +1;
  bool h_large = false;  // |h| >= 0.1, outside the small-h regime
};

inline constexpr double kLargeH = 0.1;

ModelParams normalize(const PhysicalInput& input);

// Inverse of normalize for a given mass and charge sign.
PhysicalInput denormalize(const ModelParams& params, double mass = cgs::electron_mass,
                          int charge_sign = -1);

// Builds ModelParams directly from dimensionless values. p and energy are the
// leading-order singular values; callers refine them from an exact root.
ModelParams make_params(double e0, double h, double omega_n, int branch = +1);

// Longitudinal momentum at which the singular pair exists.
double singular_momentum(double e0, double omega_n);

// Leading-order energy of the singular pair; accurate to O(h).
double singular_energy(double e0, double omega_n);

// Magnetic moment e hbar / (2 m c) for the given mass and charge sign.
double magnetic_moment(double mass, int charge_sign);

}  // namespace rotloc
