#include "rotloc/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotloc/errors.hpp"

namespace rotloc {
namespace {

using cd = std::complex<double>;

// Roots of E^2 + b E - 1 without cancellation; the product is -1.
std::array<double, 2> quadratic_roots(double b) {
  const double disc = std::sqrt(b * b + 4.0);
  const double q = -0.5 * (b + (b >= 0.0 ? disc : -disc));
  return {q, -1.0 / q};
}

// P(E) = (E - e0)(E - r1)(E - r2) - h^2 E, which stays accurate next to the
// clustered roots.
cd poly_factored(double e0, double h, const std::array<double, 2>& q, cd e) {
  return (e - e0) * (e - q[0]) * (e - q[1]) - h * h * e;
}

cd dpoly_factored(double e0, double h, const std::array<double, 2>& q, cd e) {
  const cd a = e - e0, b = e - q[0], c = e - q[1];
  return a * b + a * c + b * c - h * h;
}

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Continuation from the h = 0 roots {e0, r_near, r_far}. The cluster
// {e0, r_near} is solved as a local quadratic in delta = E - e0:
//   delta (delta - eps) = h^2 E / (E - r_far),  eps = r_near - e0,
// and the isolated root by the fixed point E = r_far + h^2 E / ((E - e0)(E - r_near)).
bool continuation(double e0, double h, const std::array<double, 2>& q,
                  std::array<cd, 3>& out) {
  const bool first_near = std::abs(q[0] - e0) <= std::abs(q[1] - e0);
  const double r_near = first_near ? q[0] : q[1];
  const double r_far = first_near ? q[1] : q[0];
  const double eps = r_near - e0;
  const double h2 = h * h;

  std::array<cd, 2> cluster{};
  for (int sign : {+1, -1}) {
    cd e = (sign > 0) == (eps >= 0.0) ? cd(r_near) : cd(e0);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      const cd g = h2 * e / (e - r_far);
      const cd root = std::sqrt(cd(eps * eps) + 4.0 * g);
      // Pick the numerically stable pairing of the two quadratic roots.
      const cd big = 0.5 * (cd(eps) + (eps >= 0.0 ? root : -root));
      const cd small = std::abs(big) > 0.0 ? -g / big : cd(0.0);
      const cd delta = ((sign > 0) == (eps >= 0.0)) ? big : small;
      const cd next = e0 + delta;
      if (!finite(next)) return false;
      const bool done = std::abs(next - e) <= 4e-16 * std::max(1.0, std::abs(next));
      e = next;
      if (done) {
        converged = true;
        break;
      }
    }
    if (!converged) return false;
    cluster[sign > 0 ? 0 : 1] = e;
  }

  cd e = r_far;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const cd next = r_far + h2 * e / ((e - e0) * (e - r_near));
    if (!finite(next)) return false;
    const bool done = std::abs(next - e) <= 4e-16 * std::max(1.0, std::abs(next));
    e = next;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) return false;
  out = {cluster[0], cluster[1], e};
  return true;
}

// Simultaneous Aberth iteration on the monic cubic.
std::array<cd, 3> aberth(double e0, double h, const std::array<double, 2>& q) {
  const double radius = 1.0 + std::max({std::abs(e0), std::abs(q[0]), std::abs(q[1]), h});
  std::array<cd, 3> z;
  for (int k = 0; k < 3; ++k) z[k] = std::polar(radius, 0.4 + 2.0 * std::numbers::pi * k / 3.0);
  for (int it = 0; it < 500; ++it) {
    double move = 0.0;
    for (int k = 0; k < 3; ++k) {
      const cd ratio = poly_factored(e0, h, q, z[k]) / dpoly_factored(e0, h, q, z[k]);
      cd sum = 0.0;
      for (int j = 0; j < 3; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cd step = ratio / (1.0 - ratio * sum);
      if (finite(step)) {
        z[k] -= step;
        move = std::max(move, std::abs(step));
      }
    }
    if (move < 1e-16 * radius) break;
  }
  return z;
}

cd polish(double e0, double h, const std::array<double, 2>& q, cd e) {
  for (int it = 0; it < 4; ++it) {
    const cd p = poly_factored(e0, h, q, e);
    const cd dp = dpoly_factored(e0, h, q, e);
    if (p == cd(0.0) || dp == cd(0.0)) break;
    const cd next = e - p / dp;
    if (!finite(next) || std::abs(poly_factored(e0, h, q, next)) >= std::abs(p)) break;
    e = next;
  }
  // Snap numerically real roots onto the real axis.
  if (std::abs(e.imag()) <= 1e-14 * std::max(1.0, std::abs(e.real()))) e.imag(0.0);
  return e;
}

}  // namespace

double singular_b(double e0) {
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  return 1.0 / e0 - e0;
}

std::complex<double> char_poly(const CharInput& in, std::complex<double> e) {
  return (e - in.e0) * (e * (e + in.b) - 1.0) - e * in.h * in.h;
}

double char_poly_scale(const CharInput& in, std::complex<double> e) {
  // Terms of the expanded monic cubic.
  const double a = std::abs(e);
  return a * a * a + std::abs(in.b - in.e0) * a * a +
         std::abs(1.0 + in.b * in.e0 + in.h * in.h) * a + std::abs(in.e0);
}

CharRoots solve_characteristic(const CharInput& in, double singular_tol) {
  if (!(in.e0 > 0.0)) throw DomainError("e0 must be positive");
  if (!(in.h >= 0.0) || !std::isfinite(in.h)) throw DomainError("h must be non-negative");
  if (!std::isfinite(in.b)) throw DomainError("b must be finite");

  const auto q = quadratic_roots(in.b);
  CharRoots out;
  const bool singular = std::abs(in.b - singular_b(in.e0)) <= singular_tol;
  out.classification = singular ? RootClass::singular_pair : RootClass::generic;
  if (singular) out.pair_slope = in.e0 / std::sqrt(in.e0 * in.e0 + 1.0);

  if (in.h == 0.0) {
    out.roots = {cd(in.e0), cd(q[0]), cd(q[1])};
  } else if (!continuation(in.e0, in.h, q, out.roots)) {
    out.roots = aberth(in.e0, in.h, q);
    out.used_fallback = true;
  }
  if (in.h != 0.0) {
    for (auto& r : out.roots) r = polish(in.e0, in.h, q, r);
  }

  std::sort(out.roots.begin(), out.roots.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (int k = 0; k < 3; ++k) {
    const cd e = out.roots[k];
    out.residuals[k] = std::abs(poly_factored(in.e0, in.h, q, e)) / char_poly_scale(in, e);
  }
  if (!singular) {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(out.roots[i] - out.roots[j]) < 1e-8) out.ill_conditioned = true;
  }
  return out;
}

double singular_root(const CharRoots& roots, double e0, int branch) {
  if (roots.classification != RootClass::singular_pair) {
    throw DomainError("singular_root: configuration is not singular");
  }
  if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
  // The two roots closest to e0 form the pair.
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(roots.roots[a] - e0) < std::abs(roots.roots[b] - e0);
  });
  const cd a = roots.roots[idx[0]], b = roots.roots[idx[1]];
  if (a.imag() != 0.0 || b.imag() != 0.0) {
    throw DomainError("singular_root: pair roots are complex");
  }
  const double hi = std::max(a.real(), b.real());
  const double lo = std::min(a.real(), b.real());
  return branch > 0 ? hi : lo;
}

PairExpansion singular_expansion(double e0, double h, int order) {
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  if (order != 1 && order != 2) throw DomainError("order must be 1 or 2");
  const double slope = e0 / std::sqrt(e0 * e0 + 1.0);
  PairExpansion out{e0 + h * slope, e0 - h * slope, 0.0};
  if (order == 2) {
    out.second_order_coeff = fit_second_order_coeff(e0);
    out.e_plus += h * h * out.second_order_coeff;
    out.e_minus += h * h * out.second_order_coeff;
  }
  return out;
}

double fit_second_order_coeff(double e0, double h_ref) {
  auto pair_mean = [&](double h) {
    const auto r = solve_characteristic({e0, h, singular_b(e0)});
    const double plus = singular_root(r, e0, +1);
    const double minus = singular_root(r, e0, -1);
    return ((plus - e0) + (minus - e0)) / (2.0 * h * h);
  };
  // The pair mean is even in h, so the error is O(h^2).
  const double coarse = pair_mean(h_ref);
  const double fine = pair_mean(0.5 * h_ref);
  return (4.0 * fine - coarse) / 3.0;
}

double third_root_expansion(double e0, double h) {
  if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
  const double s2 = 1.0 + e0 * e0;
  return -1.0 / e0 - e0 * h * h / (s2 * s2);
}

GaussianParams gaussian_params(double e0, double e_root, double h, double omega_n) {
  const double d = omega_n * e0 / 2.0;
  if (!(d > 0.0)) throw DomainError("d = omega_n e0 / 2 must be positive");
  const double gap = e_root - e0;
  if (std::abs(gap) < 1e-14) {
    throw DegenerateError("d2 undefined: root coincides with e0 (h = 0 singular point)");
  }
  return {d, e0 * h / (2.0 * gap)};
}

double d2_first_order(double e0, int branch) {
  return branch * std::sqrt(e0 * e0 + 1.0) / 2.0;
}

SingularModel singular_model(double e0, double h, double omega_n, int branch) {
  if (!(h > 0.0)) throw DegenerateError("singular_model: h must be positive (d2 is undefined at h = 0)");
  ModelParams m = make_params(e0, h, omega_n, branch);
  const double b = 2.0 * m.p - omega_n;
  SingularModel out{m, 0.0, solve_characteristic({e0, h, b})};
  out.e_root = singular_root(out.roots, e0, branch);
  out.params = with_root(m, out.e_root);
  return out;
}

ModelParams with_root(ModelParams m, double e_root) {
  const auto g = gaussian_params(m.e0, e_root, m.h, m.omega_n);
  m.d = g.d;
  m.d2 = g.d2;
  m.energy = e_root + m.p;
  return m;
}

}  // namespace rotloc
