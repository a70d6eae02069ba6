#include "rotloc/logquad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "rotloc/errors.hpp"

namespace rotloc {

LogValue LogValue::from_double(double v) {
  if (v == 0.0) return zero();
  return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
}

double LogValue::to_double() const {
  return sign == 0 ? 0.0 : sign * std::exp(log_mag);
}

LogValue operator*(const LogValue& a, const LogValue& b) {
  if (a.sign == 0 || b.sign == 0) return LogValue::zero();
  return {a.sign * b.sign, a.log_mag + b.log_mag};
}

LogValue operator/(const LogValue& a, const LogValue& b) {
  if (b.sign == 0) throw DomainError("LogValue division by zero");
  if (a.sign == 0) return LogValue::zero();
  return {a.sign * b.sign, a.log_mag - b.log_mag};
}

LogValue operator+(const LogValue& a, const LogValue& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const LogValue& big = a.log_mag >= b.log_mag ? a : b;
  const LogValue& small = a.log_mag >= b.log_mag ? b : a;
  const double rel = std::exp(small.log_mag - big.log_mag);
  if (big.sign == small.sign) return {big.sign, big.log_mag + std::log1p(rel)};
  if (rel == 1.0) return LogValue::zero();
  return {big.sign, big.log_mag + std::log1p(-rel)};
}

double ratio(const LogValue& a, const LogValue& b) {
  if (b.sign == 0) throw DomainError("ratio: zero denominator");
  if (a.sign == 0) return 0.0;
  return a.sign * b.sign * std::exp(a.log_mag - b.log_mag);
}

std::string to_string(const LogValue& v) {
  if (v.sign == 0) return "0";
  std::ostringstream os;
  os.precision(17);
  os << (v.sign > 0 ? "+" : "-") << "exp(" << v.log_mag << ")";
  return os.str();
}

namespace {

double series_i0(double u) {
  const double q = 0.25 * u * u;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double series_i1(double u) {
  const double q = 0.25 * u * u;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return 0.5 * u * sum;
}

// I_nu(x) e^{-x} for x > 0 and nu in {0, 1}.
double asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

ScaledBessel bessel_i0_scaled(double u) {
  const double a = std::abs(u);
  if (a <= kBesselSeriesLimit) return {series_i0(a) * std::exp(-a), a};
  return {asymptotic_scaled(0, a), a};
}

ScaledBessel bessel_i0_prime_scaled(double u) {
  const double a = std::abs(u);
  const double s = u < 0.0 ? -1.0 : 1.0;
  if (a <= kBesselSeriesLimit) return {s * series_i1(a) * std::exp(-a), a};
  return {s * asymptotic_scaled(1, a), a};
}

namespace {

struct GaussRule {
  std::array<double, kGaussOrder> x{};
  std::array<double, kGaussOrder> w{};
};

GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr int n = kGaussOrder;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[i] = x;
    rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

std::vector<double> initial_breakpoints(double peak_width) {
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<double> bp{0.0};
  if (peak_width > 0.0 && peak_width < kGradeThreshold) {
    for (double x = peak_width / 8.0; x < half_pi; x *= 2.0) bp.push_back(x);
  } else {
    for (int k = 1; k < 4; ++k) bp.push_back(half_pi * k / 4.0);
  }
  bp.push_back(half_pi);
  return bp;
}

struct LevelSum {
  LogValue value;
  LogValue l1;
};

void evaluate_panel(const ScaledIntegrand& f, const GaussRule& rule, double a, double b,
                    ScaledSample* out) {
  const double half_pi = 0.5 * std::numbers::pi;
  const double half = 0.5 * (b - a);
  for (int i = 0; i < kGaussOrder; ++i) {
    const double gap = a + half * (1.0 + rule.x[i]);
    out[i] = f.eval({half_pi - gap, gap});
  }
}

LevelSum sum_level(const ScaledIntegrand& f, const std::vector<double>& bp, Exec exec) {
  const auto& rule = gauss_rule();
  const int panels = static_cast<int>(bp.size()) - 1;
  std::vector<ScaledSample> samples(static_cast<std::size_t>(panels) * kGaussOrder);

  for_each_index(panels, exec, [&](int p) {
    evaluate_panel(f, rule, bp[p], bp[p + 1], &samples[static_cast<std::size_t>(p) * kGaussOrder]);
  });

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (s.prefactor != 0.0) top = std::max(top, s.exponent);
  }
  if (!std::isfinite(top)) return {LogValue::zero(), LogValue::zero()};

  // Fixed order: nodes within a panel, then panels left to right.
  double total = 0.0, l1 = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double half = 0.5 * (bp[p + 1] - bp[p]);
    double part = 0.0, part_l1 = 0.0;
    for (int i = 0; i < kGaussOrder; ++i) {
      const auto& s = samples[static_cast<std::size_t>(p) * kGaussOrder + i];
      if (s.prefactor == 0.0) continue;
      const double v = rule.w[i] * s.prefactor * std::exp(s.exponent - top);
      part += v;
      part_l1 += std::abs(v);
    }
    total += half * part;
    l1 += half * part_l1;
  }
  LogValue value = LogValue::from_double(total);
  LogValue norm = LogValue::from_double(l1);
  if (!value.is_zero()) value.log_mag += top + f.exponent_offset;
  if (!norm.is_zero()) norm.log_mag += top + f.exponent_offset;
  return {value, norm};
}

}  // namespace

const std::array<double, kGaussOrder>& gauss_nodes() { return gauss_rule().x; }
const std::array<double, kGaussOrder>& gauss_weights() { return gauss_rule().w; }

QuadResult integrate_scaled(const ScaledIntegrand& f, double rel_tol, Exec exec) {
  if (!(rel_tol >= kMinRelTol)) throw DomainError("rel_tol must be >= 1e-13");
  if (!f.eval) throw DomainError("integrand is empty");

  std::vector<double> bp = initial_breakpoints(f.peak_width);
  LevelSum prev = sum_level(f, bp, exec);
  for (int level = 1; level <= kMaxRefinements; ++level) {
    std::vector<double> finer;
    finer.reserve(2 * bp.size());
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      finer.push_back(bp[i]);
      finer.push_back(0.5 * (bp[i] + bp[i + 1]));
    }
    finer.push_back(bp.back());
    bp.swap(finer);

    const LevelSum cur = sum_level(f, bp, exec);
    double change = 0.0;
    if (!cur.l1.is_zero()) {
      change = std::abs(ratio(cur.value - prev.value, cur.l1));
    } else if (!prev.l1.is_zero()) {
      change = 1.0;
    }
    if (change <= rel_tol) {
      return {cur.value, static_cast<int>(bp.size()) - 1, level, change};
    }
    if (level == kMaxRefinements) {
      throw ConvergenceError("integrate_scaled: no convergence within the panel cap",
                             prev.value.log_mag, cur.value.log_mag);
    }
    prev = cur;
  }
  throw ConvergenceError("integrate_scaled: unreachable", 0.0, 0.0);
}

}  // namespace rotloc
