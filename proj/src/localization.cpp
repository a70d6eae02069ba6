#include "rotloc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rotloc/errors.hpp"

namespace rotloc {

const char* to_string(YConvention y) {
  return y == YConvention::decaying ? "decaying" : "growing";
}

double lab_radius_closed(double e0) {
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  return std::sqrt((e0 * e0 + 1.0) / (std::numbers::pi * e0 * e0));
}

double lab_moment_closed(double d, double d2) {
  if (!(d > 0.0)) throw DomainError("d must be positive");
  return 1.0 / d + (d2 / d) * (d2 / d);
}

LabQuadrature lab_radius_numeric(const LabState& st, double rel_tol, double z, double t,
                                 Exec exec) {
  const auto& m = st.params;
  if (!(m.d > 0.0)) throw DomainError("lab_radius_numeric: d must be positive");
  const double chi = m.omega_n * t - st.field.k * z;
  const double shift = m.d2 / m.d;
  // y~ = n . (x, y) with n = (-s sin chi, cos chi); the density peaks at shift * n.
  const double cx = -st.convention.rotation_sense * std::sin(chi) * shift;
  const double cy = std::cos(chi) * shift;
  const double half = 8.0 / std::sqrt(m.d);

  const auto& xs = gauss_nodes();
  const auto& ws = gauss_weights();

  auto level = [&](int panels) {
    const int n = panels * kGaussOrder;
    const double h = 2.0 * half / panels;
    std::vector<double> coord(n), weight(n);
    for (int p = 0; p < panels; ++p) {
      for (int i = 0; i < kGaussOrder; ++i) {
        coord[p * kGaussOrder + i] = -half + h * (p + 0.5 * (1.0 + xs[i]));
        weight[p * kGaussOrder + i] = 0.5 * h * ws[i];
      }
    }
    std::vector<double> row0(n), row2(n);
    auto do_row = [&](int a) {
      const double x = cx + coord[a];
      double s0 = 0.0, s2 = 0.0;
      for (int b = 0; b < n; ++b) {
        const double y = cy + coord[b];
        const double rho = weight[b] * psi_lab(st, {x, y, z, t}).norm2();
        s0 += rho;
        s2 += rho * (x * x + y * y);
      }
      row0[a] = weight[a] * s0;
      row2[a] = weight[a] * s2;
    };
    for_each_index(n, exec, do_row);
    double i0 = 0.0, i2 = 0.0;
    for (int a = 0; a < n; ++a) {
      i0 += row0[a];
      i2 += row2[a];
    }
    return std::array<double, 2>{i0, i2};
  };

  int panels = 4;
  auto prev = level(panels);
  for (;;) {
    panels *= 2;
    const auto cur = level(panels);
    const double mean_prev = prev[1] / prev[0];
    const double mean_cur = cur[1] / cur[0];
    const bool settled = std::abs(mean_cur - mean_prev) <= rel_tol * std::abs(mean_cur) &&
                         std::abs(cur[0] - prev[0]) <= rel_tol * std::abs(cur[0]);
    if (settled) {
      LabQuadrature out;
      out.norm = cur[0];
      out.mean_r2 = mean_cur;
      out.rms = std::sqrt(mean_cur);
      out.rms_lambda = out.rms * m.omega_n / (2.0 * std::numbers::pi);
      out.panels_per_axis = panels;
      return out;
    }
    if (panels >= 64) {
      throw ConvergenceError("lab_radius_numeric: <r^2> did not settle", mean_prev, mean_cur);
    }
    prev = cur;
  }
}

namespace {

enum class Weight { eta, sigma, xi, sin3, sin4 };

ScaledIntegrand make_integrand(double kappa, double e0, int branch, YConvention y, Weight wgt) {
  const double s = std::sqrt(e0 * e0 + 1.0);
  const double b = 0.5 * e0;
  const int ys = static_cast<int>(y);
  // s - ys e0 without cancellation.
  const double gap_rate = ys > 0 ? 1.0 / (s + e0) : s + e0;
  const double a = branch * s;
  const bool prime = wgt == Weight::sigma || wgt == Weight::sin4;

  ScaledIntegrand f;
  f.exponent_offset = kappa * (s - ys * b);
  f.peak_width = kappa > 0.0 ? 1.0 / std::sqrt(kappa * gap_rate) : 0.0;
  f.eval = [=](const QuadPoint& pt) {
    const double sn = std::cos(pt.gap);
    const double cs = std::sin(pt.gap);
    const double half_sin = std::sin(0.5 * pt.gap);
    const double q = 2.0 * half_sin * half_sin;  // 1 - sin(theta)
    const double u = a * kappa * sn;
    const double bes = prime ? bessel_i0_prime_scaled(u).value : bessel_i0_scaled(u).value;
    double geom = 0.0;
    switch (wgt) {
      case Weight::eta: geom = sn; break;
      case Weight::sigma: geom = sn * sn; break;
      case Weight::xi: geom = sn * cs * cs; break;
      case Weight::sin3: geom = sn * sn * sn; break;
      case Weight::sin4: geom = sn * sn * sn * sn; break;
    }
    return ScaledSample{bes * geom, -kappa * q * (gap_rate + ys * b * q)};
  };
  return f;
}

void check_rot_args(double kappa, double e0, int branch) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be >= 0");
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
}

}  // namespace

RotIntegrals rot_integrals(double kappa, double e0, int branch, YConvention y, double rel_tol,
                           Exec exec) {
  check_rot_args(kappa, e0, branch);
  RotIntegrals out;
  out.kappa = kappa;
  out.e0 = e0;
  out.branch = branch;
  out.y = y;
  const auto eta = integrate_scaled(make_integrand(kappa, e0, branch, y, Weight::eta), rel_tol, exec);
  const auto sigma = integrate_scaled(make_integrand(kappa, e0, branch, y, Weight::sigma), rel_tol, exec);
  const auto xi = integrate_scaled(make_integrand(kappa, e0, branch, y, Weight::xi), rel_tol, exec);
  out.eta = eta.value;
  out.sigma = sigma.value;
  out.xi = xi.value;
  out.panels = std::max({eta.panels, sigma.panels, xi.panels});
  out.achieved = std::max({eta.achieved, sigma.achieved, xi.achieved});
  return out;
}

NumeratorIntegrals numerator_integrals(double kappa, double e0, int branch, YConvention y,
                                       double rel_tol, Exec exec) {
  check_rot_args(kappa, e0, branch);
  return {integrate_scaled(make_integrand(kappa, e0, branch, y, Weight::sin3), rel_tol, exec).value,
          integrate_scaled(make_integrand(kappa, e0, branch, y, Weight::sin4), rel_tol, exec).value};
}

LogValue sin4_from_reduction(const RotIntegrals& r) {
  if (!(r.kappa > 0.0)) throw DomainError("sin4_from_reduction: kappa must be positive");
  const double s = std::sqrt(r.e0 * r.e0 + 1.0);
  return r.sigma - LogValue::from_double(r.branch * s / r.e0) * r.xi +
         LogValue::from_double(1.0 / (r.kappa * r.e0)) * r.sigma;
}

OdeResidual ode_residual(double kappa, double e0, int branch, double fd_step, YConvention y,
                         double rel_tol) {
  if (!(fd_step > 0.0) || !(kappa >= fd_step)) {
    throw DomainError("ode_residual: need kappa >= fd_step > 0");
  }
  const RotIntegrals mid = rot_integrals(kappa, e0, branch, y, rel_tol);
  const LogValue scale = mid.eta;
  auto scaled = [&](const RotIntegrals& r) {
    return std::array<double, 3>{ratio(r.sigma, scale), ratio(r.xi, scale), ratio(r.eta, scale)};
  };
  auto derivative = [&](double h) {
    const auto p = scaled(rot_integrals(kappa + h, e0, branch, y, rel_tol));
    const auto m = scaled(rot_integrals(kappa - h, e0, branch, y, rel_tol));
    return std::array<double, 3>{(p[0] - m[0]) / (2 * h), (p[1] - m[1]) / (2 * h),
                                 (p[2] - m[2]) / (2 * h)};
  };
  const auto lhs = derivative(fd_step);
  const auto lhs_half = derivative(0.5 * fd_step);

  const auto v = scaled(mid);
  const double sig = v[0], xi = v[1], eta = v[2];
  const double s = std::sqrt(e0 * e0 + 1.0);
  const double br = branch;

  const std::array<double, 4> t_sig{br * s * eta, -br * 0.5 * s * xi, -0.5 * e0 * sig,
                                    -1.5 * sig / kappa};
  const std::array<double, 4> t_xi{(s * s / (2.0 * e0)) * xi, -br * s / (2.0 * kappa * e0) * sig,
                                   -1.5 * xi / kappa, 0.5 * eta / kappa};
  const std::array<double, 4> t_eta{br * s * sig, -0.5 * e0 * eta, 0.5 * e0 * xi, 0.0};

  OdeResidual out;
  const std::array<const std::array<double, 4>*, 3> terms{&t_sig, &t_xi, &t_eta};
  for (int k = 0; k < 3; ++k) {
    double rhs = 0.0, mag = std::abs(lhs[k]);
    double tmag = 0.0;
    for (double term : *terms[k]) {
      rhs += term;
      tmag += std::abs(term);
    }
    mag = std::max(mag, tmag);
    out.lhs[k] = lhs[k];
    out.rhs[k] = rhs;
    out.residual[k] = mag > 0.0 ? std::abs(lhs[k] - rhs) / mag : 0.0;
    if (std::abs(lhs[k] - lhs_half[k]) > 1e-6 * std::max(mag, 1e-300)) out.step_warning = true;
  }
  return out;
}

LocalizationReport rot_radius(double kappa, double e0, int branch, double rel_tol, YConvention y,
                              Exec exec) {
  check_rot_args(kappa, e0, branch);
  if (!(kappa > 0.0)) throw DomainError("rot_radius: kappa must be positive");
  LocalizationReport rep;
  rep.kappa = kappa;
  rep.e0 = e0;
  rep.branch = branch;
  rep.y = y;
  rep.rel_tol = rel_tol;
  rep.small_kappa_warning = kappa < 10.0;

  const RotIntegrals r = rot_integrals(kappa, e0, branch, y, rel_tol, exec);
  rep.integrals = r;
  rep.panels = r.panels;
  rep.achieved = r.achieved;

  const double s = std::sqrt(e0 * e0 + 1.0);
  // Denominator: psi*psi eta + psi* alpha1 psi sigma with the common 4 h^2 removed.
  const LogValue den = LogValue::from_double(e0 * e0) * r.eta -
                       LogValue::from_double(branch * e0 * e0 * e0 / s) * r.sigma;
  if (den.sign <= 0) throw ConvergenceError("rot_radius: non-positive normalization", 0.0, 0.0);
  // The xi terms of the reduced numerator cancel against den, leaving
  // 1 - <r^2>/kappa^2 = branch e0^2 sigma / (s kappa den).
  const double deficit = ratio(LogValue::from_double(branch * e0 * e0 / (s * kappa)) * r.sigma, den);

  rep.one_minus_ratio = -std::expm1(0.5 * std::log1p(-deficit));
  rep.ratio_rot_over_bound = 1.0 - rep.one_minus_ratio;
  rep.rot_rms_compton = kappa * rep.ratio_rot_over_bound;
  rep.rot_rms_lambda = rep.ratio_rot_over_bound / (2.0 * std::numbers::pi);

  rep.lab_rms_lambda = lab_radius_closed(e0);
  rep.lab_rms_compton = rep.lab_rms_lambda * 2.0 * std::numbers::pi * kappa;
  const double moment = lab_moment_closed(e0 / (2.0 * kappa), s / 2.0);
  rep.lab_rms_moment_lambda = std::sqrt(moment) / (2.0 * std::numbers::pi * kappa);
  return rep;
}

double rot_ratio_direct(double kappa, double e0, int branch, double rel_tol, YConvention y) {
  check_rot_args(kappa, e0, branch);
  const RotIntegrals r = rot_integrals(kappa, e0, branch, y, rel_tol);
  const NumeratorIntegrals n = numerator_integrals(kappa, e0, branch, y, rel_tol);
  const double s = std::sqrt(e0 * e0 + 1.0);
  const LogValue c_alpha = LogValue::from_double(-branch * e0 * e0 * e0 / s);
  const LogValue c_psi = LogValue::from_double(e0 * e0);
  const LogValue den = c_psi * r.eta + c_alpha * r.sigma;
  const LogValue num = c_psi * n.sin3 + c_alpha * n.sin4;
  return std::sqrt(ratio(num, den));
}

ModeRates mode_rates(double e0, int branch) {
  const double s = std::sqrt(e0 * e0 + 1.0);
  return {(e0 * e0 + 1.0) / (2.0 * e0), branch * s - 0.5 * e0, -branch * s - 0.5 * e0};
}

namespace {

// Least squares log|Q| = a kappa + b log(kappa) + c, normal equations in long double
// on scaled columns.
QuantityFit fit_quantity(std::span<const double> kappa, std::span<const double> logq,
                         const ModeRates& rates) {
  using LD = long double;
  const std::size_t n = kappa.size();
  const LD ks = *std::max_element(kappa.begin(), kappa.end());
  LD ata[3][3] = {}, atb[3] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const LD row[3] = {kappa[i] / ks, std::log(LD(kappa[i])), 1.0L};
    for (int r = 0; r < 3; ++r) {
      atb[r] += row[r] * logq[i];
      for (int c = 0; c < 3; ++c) ata[r][c] += row[r] * row[c];
    }
  }
  // Gauss-Jordan with partial pivoting.
  LD aug[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) aug[r][c] = ata[r][c];
    aug[r][3] = atb[r];
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(aug[r][c]) > std::abs(aug[piv][c])) piv = r;
    for (int k = 0; k < 4; ++k) std::swap(aug[c][k], aug[piv][k]);
    if (aug[c][c] == 0.0L) throw ConvergenceError("asymptotic fit: singular design", 0.0, 0.0);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const LD f = aug[r][c] / aug[c][c];
      for (int k = c; k < 4; ++k) aug[r][k] -= f * aug[c][k];
    }
  }
  QuantityFit fit;
  fit.rate = static_cast<double>(aug[0][3] / aug[0][0] / ks);
  fit.log_power = static_cast<double>(aug[1][3] / aug[1][1]);
  fit.intercept = static_cast<double>(aug[2][3] / aug[2][2]);
  LD ss = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const LD model = LD(fit.rate) * kappa[i] + LD(fit.log_power) * std::log(LD(kappa[i])) +
                     LD(fit.intercept);
    ss += (logq[i] - model) * (logq[i] - model);
  }
  fit.rms_residual = static_cast<double>(std::sqrt(ss / n));
  const double cand[3] = {rates.rho1, rates.rho2, rates.rho3};
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(fit.rate - cand[k]) < std::abs(fit.rate - cand[best])) best = k;
  fit.nearest_mode = best + 1;
  fit.nearest_rel_error = std::abs(fit.rate - cand[best]) / std::abs(cand[best]);
  return fit;
}

}  // namespace

AsymptoticFit asymptotic_coefficients(std::span<const double> kappa_grid, double e0, int branch,
                                      double fit_tol, double rel_tol) {
  if (kappa_grid.size() < 4) throw DomainError("asymptotic_coefficients: need >= 4 grid points");
  const auto [lo, hi] = std::minmax_element(kappa_grid.begin(), kappa_grid.end());
  if (*lo < 100.0 || *hi < 10.0 * *lo) {
    throw DomainError("asymptotic_coefficients: grid must span a decade with kappa >= 100");
  }
  AsymptoticFit out;
  out.rates = mode_rates(e0, branch);
  const std::size_t n = kappa_grid.size();
  std::vector<double> le(n), ls(n), lx(n);
  std::vector<RotIntegrals> ints(n);
  for_each_index(static_cast<int>(n), Exec::parallel, [&](int i) {
    ints[i] = rot_integrals(kappa_grid[i], e0, branch, YConvention::decaying, rel_tol, Exec::serial);
  });
  const double s = std::sqrt(e0 * e0 + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = ints[i];
    le[i] = r.eta.log_mag;
    ls[i] = r.sigma.log_mag;
    lx[i] = r.xi.log_mag;
    out.kappa.push_back(kappa_grid[i]);
    // Amplitudes X_k = C_k rho_k in units of eta.
    const double x1 = ratio(r.xi, r.eta);
    const double a = 1.0 + e0 * e0 * x1;
    const double b = ratio(r.sigma, r.eta) + branch * s * e0 * x1;
    const double xs[3] = {x1, 0.5 * (a + b), 0.5 * (b - a)};
    const double rate[3] = {out.rates.rho1, out.rates.rho2, out.rates.rho3};
    std::array<double, 3> lc{};
    for (int k = 0; k < 3; ++k) {
      lc[k] = xs[k] == 0.0 ? -std::numeric_limits<double>::infinity()
                           : std::log(std::abs(xs[k])) + r.eta.log_mag - rate[k] * kappa_grid[i];
    }
    out.log_c.push_back(lc);
  }
  out.eta = fit_quantity(kappa_grid, le, out.rates);
  out.sigma = fit_quantity(kappa_grid, ls, out.rates);
  out.xi = fit_quantity(kappa_grid, lx, out.rates);
  for (const auto* f : {&out.eta, &out.sigma, &out.xi}) {
    if (f->rms_residual > fit_tol) {
      throw ConvergenceError("asymptotic fit residual exceeds tolerance", fit_tol, f->rms_residual);
    }
  }
  return out;
}

std::vector<double> log_grid(double from, double to, int points) {
  if (!(from > 0.0) || !(to >= from) || points < 1) throw DomainError("log_grid: bad range");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = from;
    return g;
  }
  const double lf = std::log10(from), lt = std::log10(to);
  for (int i = 0; i < points; ++i) g[i] = std::pow(10.0, lf + (lt - lf) * i / (points - 1));
  g.front() = from;
  g.back() = to;
  return g;
}

std::vector<SweepRow> sweep(double kappa_from, double kappa_to, int points, double e0, int branch,
                            double rel_tol, Exec exec) {
  const auto grid = log_grid(kappa_from, kappa_to, points);
  std::vector<SweepRow> rows(grid.size());
  auto one = [&](int i) {
    const auto rep = rot_radius(grid[i], e0, branch, rel_tol, YConvention::decaying, Exec::serial);
    rows[i] = {grid[i], e0, branch, rep.integrals.eta.log_mag, rep.integrals.sigma.log_mag,
               rep.integrals.xi.log_mag, rep.ratio_rot_over_bound, rep.one_minus_ratio};
  };
  for_each_index(static_cast<int>(grid.size()), exec, one);
  return rows;
}

}  // namespace rotloc
