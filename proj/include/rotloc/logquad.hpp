#pragma once

#include <array>
#include <functional>
#include <string>

#include "rotloc/exec.hpp"

namespace rotloc {

// Signed value stored as sign * exp(log_mag). sign == 0 means exactly zero.
struct LogValue {
  int sign = 0;
  double log_mag = 0.0;

  static LogValue zero() { return {}; }
  static LogValue from_double(double v);
  static LogValue from_log(int sign, double log_mag) { return {sign, log_mag}; }

  bool is_zero() const { return sign == 0; }
  double to_double() const;  // may overflow to +-inf

  LogValue operator-() const { return {-sign, log_mag}; }
  friend LogValue operator*(const LogValue& a, const LogValue& b);
  friend LogValue operator/(const LogValue& a, const LogValue& b);
  friend LogValue operator+(const LogValue& a, const LogValue& b);
  friend LogValue operator-(const LogValue& a, const LogValue& b) { return a + (-b); }
};

// a / b as a plain double; finite whenever the ratio is representable.
double ratio(const LogValue& a, const LogValue& b);

std::string to_string(const LogValue& v);

struct ScaledBessel {
  double value;           // I(u) exp(-|u|)
  double log_correction;  // |u|
};

// I0(u) e^{-|u|}; power series for |u| <= kBesselSeriesLimit, asymptotic beyond.
ScaledBessel bessel_i0_scaled(double u);

// I0'(u) e^{-|u|} = I1(u) e^{-|u|}; odd in u.
ScaledBessel bessel_i0_prime_scaled(double u);

inline constexpr double kBesselSeriesLimit = 25.0;

// Quadrature node on [0, pi/2]; gap = pi/2 - theta is carried separately so
// integrands concentrated at theta = pi/2 keep full relative precision.
struct QuadPoint {
  double theta;
  double gap;
};

struct ScaledSample {
  double prefactor;
  double exponent;  // value = prefactor * exp(exponent_offset + exponent)
};

struct ScaledIntegrand {
  std::function<ScaledSample(const QuadPoint&)> eval;
  double exponent_offset = 0.0;
  // Characteristic width of the peak in gap; panels are graded geometrically
  // toward theta = pi/2 when 0 < width < kGradeThreshold.
  double peak_width = 0.0;
};

inline constexpr double kGradeThreshold = 0.1;
inline constexpr double kMinRelTol = 1e-13;
inline constexpr int kGaussOrder = 20;
inline constexpr int kMaxRefinements = 12;

struct QuadResult {
  LogValue value;
  int panels = 0;
  int refinements = 0;
  double achieved = 0.0;  // relative change at the last refinement (L1-scaled)
};

// Panel-doubling Gauss-Legendre over theta in [0, pi/2]. Throws
// ConvergenceError carrying the last two estimates (as log magnitudes) when
// kMaxRefinements is exhausted.
QuadResult integrate_scaled(const ScaledIntegrand& f, double rel_tol, Exec exec = Exec::parallel);

// Nodes and weights of the kGaussOrder-point rule on [-1, 1].
const std::array<double, kGaussOrder>& gauss_nodes();
const std::array<double, kGaussOrder>& gauss_weights();

}  // namespace rotloc
