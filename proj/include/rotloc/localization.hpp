#pragma once

#include <array>
#include <span>
#include <vector>

#include "rotloc/exec.hpp"
#include "rotloc/logquad.hpp"
#include "rotloc/wavefunction.hpp"

namespace rotloc {

// Sign of the Gaussian factor inside the theta integrals: decaying uses
// Y(w) = e^{w}, w = -kappa (e0/2) sin^2(theta); growing uses e^{-w}.
enum class YConvention { decaying = +1, growing = -1 };

const char* to_string(YConvention y);

inline constexpr double kDefaultRelTol = 1e-12;

// ---- lab frame ----

// sqrt(<x^2> + <y^2>) = lambda sqrt((e0^2 + 1) / (pi e0^2)), in units of lambda.
double lab_radius_closed(double e0);

// Gaussian moment of |exp(D)|^2: <r^2> = 1/d + (d2/d)^2 (Compton units squared).
double lab_moment_closed(double d, double d2);

struct LabQuadrature {
  double norm;        // integral of |Psi|^2, 1 when N is right
  double mean_r2;     // <r^2> in Compton units squared
  double rms;         // sqrt(mean_r2)
  double rms_lambda;  // rms / lambda with lambda = 2 pi / omega_n
  int panels_per_axis;
};

// Tensor-product Gauss-Legendre over a box of half-width 8/sqrt(d) around the
// displaced Gaussian centre, doubling panels until <r^2> and the norm settle.
LabQuadrature lab_radius_numeric(const LabState& s, double rel_tol = 1e-12, double z = 0.0,
                                 double t = 0.0, Exec exec = Exec::parallel);

// ---- rotating frame ----

struct RotIntegrals {
  LogValue eta;    // int I0(u) Y sin
  LogValue sigma;  // int I0'(u) Y sin^2
  LogValue xi;     // int I0(u) Y sin cos^2
  double kappa = 0.0;
  double e0 = 1.0;
  int branch = +1;
  YConvention y = YConvention::decaying;
  int panels = 0;
  double achieved = 0.0;
};

RotIntegrals rot_integrals(double kappa, double e0, int branch,
                           YConvention y = YConvention::decaying,
                           double rel_tol = kDefaultRelTol, Exec exec = Exec::parallel);

// Direct quadrature of int I0 Y sin^3 and int I0' Y sin^4, the two numerator
// integrals otherwise reduced to eta, sigma, xi.
struct NumeratorIntegrals {
  LogValue sin3;
  LogValue sin4;
};

NumeratorIntegrals numerator_integrals(double kappa, double e0, int branch,
                                       YConvention y = YConvention::decaying,
                                       double rel_tol = kDefaultRelTol,
                                       Exec exec = Exec::parallel);

// int I0' Y sin^4 from the reduction sigma -+ (s/e0) xi + sigma / (kappa e0).
LogValue sin4_from_reduction(const RotIntegrals& r);

struct OdeResidual {
  std::array<double, 3> residual{};  // relative; order: sigma, xi, eta
  std::array<double, 3> lhs{};       // derivatives scaled by 1/eta(kappa)
  std::array<double, 3> rhs{};
  bool step_warning = false;         // step-halving changed a derivative by > 1e-4
};

// Central differences of rot_integrals checked against the three kappa-evolution
// equations: d eta/d kappa = +-s sigma - (e0/2) eta + (e0/2) xi and the sigma, xi analogues.
OdeResidual ode_residual(double kappa, double e0, int branch, double fd_step = 1e-4,
                         YConvention y = YConvention::decaying,
                         double rel_tol = kDefaultRelTol);

struct LocalizationReport {
  double kappa = 0.0;
  double e0 = 1.0;
  int branch = +1;
  YConvention y = YConvention::decaying;

  double lab_rms_lambda = 0.0;         // closed form, units of lambda
  double lab_rms_compton = 0.0;
  double lab_rms_moment_lambda = 0.0;  // h -> 0 Gaussian moment of the lab wavefunction

  double rot_rms_lambda = 0.0;
  double rot_rms_compton = 0.0;
  double ratio_rot_over_bound = 0.0;   // rot_rms / (lambda / 2 pi)
  double one_minus_ratio = 0.0;        // 1 - ratio, kept separately for large kappa

  RotIntegrals integrals;
  int panels = 0;
  double rel_tol = 0.0;
  double achieved = 0.0;
  bool small_kappa_warning = false;    // kappa < 10
};

LocalizationReport rot_radius(double kappa, double e0, int branch,
                              double rel_tol = kDefaultRelTol,
                              YConvention y = YConvention::decaying,
                              Exec exec = Exec::parallel);

// Same ratio with the numerator integrals taken by direct quadrature.
double rot_ratio_direct(double kappa, double e0, int branch,
                        double rel_tol = kDefaultRelTol,
                        YConvention y = YConvention::decaying);

// Growth rates (per unit kappa) of the three asymptotic modes.
struct ModeRates {
  double rho1, rho2, rho3;
};

ModeRates mode_rates(double e0, int branch);

struct QuantityFit {
  double rate = 0.0;         // coefficient of kappa in log|Q| = a kappa + b log kappa + c
  double log_power = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int nearest_mode = 0;      // 1, 2 or 3
  double nearest_rel_error = 0.0;
};

struct AsymptoticFit {
  ModeRates rates;
  QuantityFit eta, sigma, xi;
  // log|C_k| implied at each grid point by solving the three-mode expansion.
  std::vector<std::array<double, 3>> log_c;
  std::vector<double> kappa;
};

inline constexpr double kDefaultFitTolerance = 0.05;

// Throws ConvergenceError when a fit's RMS residual exceeds fit_tol.
AsymptoticFit asymptotic_coefficients(std::span<const double> kappa_grid, double e0, int branch,
                                      double fit_tol = kDefaultFitTolerance,
                                      double rel_tol = kDefaultRelTol);

struct SweepRow {
  double kappa;
  double e0;
  int branch;
  double eta_log;
  double sigma_log;
  double xi_log;
  double rot_rms_over_bound;
  double one_minus_ratio;
};

// Log-spaced kappa sweep; points evaluated in parallel, rows in grid order.
std::vector<SweepRow> sweep(double kappa_from, double kappa_to, int points, double e0,
                            int branch, double rel_tol = kDefaultRelTol,
                            Exec exec = Exec::parallel);

std::vector<double> log_grid(double from, double to, int points);

}  // namespace rotloc
