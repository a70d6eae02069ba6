#pragma once

#include <array>
#include <complex>

#include "rotloc/params.hpp"

namespace rotloc {

struct CharInput {
  double e0 = 1.0;
  double h = 0.0;
  double b = 0.0;  // 2p - Omega
};

enum class RootClass { singular_pair, generic };

struct CharRoots {
  // Sorted by real part, then imaginary part. For the singular configuration
  // with real roots: [third root, minus member, plus member].
  std::array<std::complex<double>, 3> roots{};
  std::array<double, 3> residuals{};  // |P(E)| / (sum of |terms|)
  RootClass classification = RootClass::generic;
  double pair_slope = 0.0;       // e0 / sqrt(e0^2 + 1) when singular
  bool ill_conditioned = false;  // near-coincident roots away from the singular b
  bool used_fallback = false;    // Aberth iteration instead of continuation
};

inline constexpr double kSingularBTolerance = 1e-9;

// The b at which the h = 0 cubic has the double root e0.
double singular_b(double e0);

// Cleared cubic (E - e0)(E(E + b) - 1) - E h^2 and its scale for relative
// residuals.
std::complex<double> char_poly(const CharInput& in, std::complex<double> e);
double char_poly_scale(const CharInput& in, std::complex<double> e);

// All three roots, polished to relative residual 1e-12.
CharRoots solve_characteristic(const CharInput& in,
                               double singular_tol = kSingularBTolerance);

// Member of the singular pair on the given branch (+1: E > e0). Requires a
// singular configuration with real roots.
double singular_root(const CharRoots& roots, double e0, int branch);

struct PairExpansion {
  double e_plus;
  double e_minus;
  double second_order_coeff;  // 0 at order 1
};

// E = e0 +- h e0/sqrt(e0^2+1) [+ h^2 E2]; E2 is extrapolated from exact roots.
PairExpansion singular_expansion(double e0, double h, int order = 1);

// E2 from Richardson extrapolation of (E+ + E- - 2 e0) / (2 h^2).
double fit_second_order_coeff(double e0, double h_ref = 1e-3);

// Third root near -1/e0 to O(h^2): -1/e0 - e0 h^2 / (1 + e0^2)^2.
double third_root_expansion(double e0, double h);

struct GaussianParams {
  double d;   // omega_n e0 / 2
  double d2;  // e0 h / (2 (E - e0))
};

GaussianParams gaussian_params(double e0, double e_root, double h, double omega_n);

// First-order d2 of the singular pair: branch * sqrt(e0^2 + 1) / 2.
double d2_first_order(double e0, int branch);

struct SingularModel {
  ModelParams params;  // p from the singular momentum, exact energy and d2
  double e_root;
  CharRoots roots;
};

// Singular pair member on the given branch with everything derived from the
// exact root rather than the first-order expansions.
SingularModel singular_model(double e0, double h, double omega_n, int branch);

// Copies m with energy = e_root + p and the exact d2 of that root.
ModelParams with_root(ModelParams m, double e_root);

}  // namespace rotloc
