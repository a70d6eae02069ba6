#include "rotloc/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rotloc/characteristic.hpp"
#include "rotloc/errors.hpp"

namespace rotloc {

std::string to_string(const Convention& c) {
  return std::string("rotation=") + (c.rotation_sense > 0 ? "+" : "-") +
         ",polarization=" + (c.polarization_sense > 0 ? "+" : "-");
}

FieldPotential make_potential(const ModelParams& m) {
  return {-2.0 * m.d, m.h * m.omega_n, m.omega_n, m.omega_n};
}

VectorPotential potential_at(const FieldPotential& f, double x, double y, double z, double t,
                             int polarization_sense) {
  const double phase = f.omega_n * t - f.k * z;
  const double amp = f.h_wave_amp / f.omega_n;
  return {-0.5 * f.h_z * y + amp * std::cos(phase),
          0.5 * f.h_z * x + polarization_sense * amp * std::sin(phase)};
}

double GroundSpinor::norm_const() const { return std::exp(log_norm); }

GroundSpinor ground_spinor(double e_root, double e0, double h, double d, double d2) {
  if (!(d > 0.0)) throw DomainError("ground_spinor: d must be positive");
  GroundSpinor g;
  const double gap = e_root - e0;
  g.psi[0] = h * e_root;
  g.psi[1] = -(e_root + 1.0) * gap;
  g.psi[2] = h * e_root;
  g.psi[3] = -(e_root - 1.0) * gap;
  const double n2 = g.psi.norm2();
  if (n2 == 0.0) throw DegenerateError("ground_spinor: all components vanish");
  g.log_norm = -0.5 * (std::log(n2) + std::log(std::numbers::pi / d) + d2 * d2 / d);
  return g;
}

double bracket_normalization(const GroundSpinor& g, double e_root, double e0, double h,
                             double d, double d2) {
  const double gap = e_root - e0;
  const double bracket = h * h * e_root * e_root + (e_root * e_root + 1.0) * gap * gap;
  return std::exp(2.0 * g.log_norm + std::log(bracket) + std::log(std::numbers::pi / d) +
                  d2 * d2 / d);
}

LabState make_lab_state(const ModelParams& m, double e_root, Convention convention) {
  LabState s;
  s.params = with_root(m, e_root);
  s.e_root = e_root;
  s.field = make_potential(s.params);
  s.convention = convention;
  s.spinor = ground_spinor(e_root, m.e0, m.h, s.params.d, s.params.d2);
  return s;
}

namespace {

struct Frame {
  double chi, c, s;       // phase Omega t - k z and its cos / sin
  double xt, yt;          // co-rotating coordinates
  double xt_x, xt_y, yt_x, yt_y;
  double xt_chi, yt_chi;  // d/dchi
};

Frame co_rotating(const LabState& st, double x, double y, double z, double t) {
  const double rs = st.convention.rotation_sense;
  Frame f;
  f.chi = st.params.omega_n * t - st.field.k * z;
  f.c = std::cos(f.chi);
  f.s = std::sin(f.chi);
  f.xt = x * f.c + rs * y * f.s;
  f.yt = -rs * x * f.s + y * f.c;
  f.xt_x = f.c;
  f.xt_y = rs * f.s;
  f.yt_x = -rs * f.s;
  f.yt_y = f.c;
  f.xt_chi = -x * f.s + rs * y * f.c;
  f.yt_chi = -rs * x * f.c - y * f.s;
  return f;
}

// exp(-1/2 alpha1 alpha2 chi) = cos(chi/2) I - sin(chi/2) alpha1 alpha2, since
// (alpha1 alpha2)^2 = -I.
Matrix4C spin_rotation(double chi) {
  const auto& g = dirac_matrices();
  return cplx(std::cos(0.5 * chi)) * Matrix4C::identity() -
         cplx(std::sin(0.5 * chi)) * (g.alpha1 * g.alpha2);
}

cplx exponent_d(const LabState& st, double x, double y, const Frame& f) {
  const double d = st.params.d, d2 = st.params.d2;
  return cplx(-0.5 * d * (x * x + y * y) + d2 * f.yt, -d2 * f.xt);
}

}  // namespace

Spinor4 psi_lab(const LabState& st, const SpacetimePoint& pt) {
  const Frame f = co_rotating(st, pt.x, pt.y, pt.z, pt.t);
  const auto& m = st.params;
  const cplx scalar = cplx(0.0, -m.energy * pt.t + m.p * pt.z) +
                      exponent_d(st, pt.x, pt.y, f) + st.spinor.log_norm;
  return std::exp(scalar) * (spin_rotation(f.chi) * st.spinor.psi);
}

double density_lab(const LabState& st, double x, double y, double z, double t) {
  const Frame f = co_rotating(st, x, y, z, t);
  const auto& m = st.params;
  const double log_mod = -m.d * (x * x + y * y) + 2.0 * m.d2 * f.yt + 2.0 * st.spinor.log_norm;
  return st.spinor.psi.norm2() * std::exp(log_mod);
}

double dirac_residual(const LabState& st, const SpacetimePoint& pt) {
  const auto& g = dirac_matrices();
  const auto& m = st.params;
  const Frame f = co_rotating(st, pt.x, pt.y, pt.z, pt.t);
  const double w = m.omega_n, k = st.field.k;
  const double d = m.d, d2 = m.d2;
  const cplx i(0.0, 1.0);

  // Gradient of the scalar exponent S = -iEt + ipz + D.
  const cplx d_x = -d * pt.x - i * d2 * f.xt_x + d2 * f.yt_x;
  const cplx d_y = -d * pt.y - i * d2 * f.xt_y + d2 * f.yt_y;
  const cplx d_chi = -i * d2 * f.xt_chi + d2 * f.yt_chi;
  const cplx s_t = -i * m.energy + d_chi * w;
  const cplx s_z = i * m.p - d_chi * k;

  const Matrix4C a12 = g.alpha1 * g.alpha2;
  const Matrix4C rot = spin_rotation(f.chi);
  const Matrix4C rot_t = cplx(-0.5 * w) * (a12 * rot);
  const Matrix4C rot_z = cplx(0.5 * k) * (a12 * rot);

  const auto a = potential_at(st.field, pt.x, pt.y, pt.z, pt.t, st.convention.polarization_sense);
  // e^{-S} {-i d_t - i alpha.grad - alpha.A + beta} Psi, acting on the constant spinor.
  Matrix4C op = -i * (s_t * rot + rot_t);
  op -= i * (g.alpha1 * (d_x * rot) + g.alpha2 * (d_y * rot) + g.alpha3 * (s_z * rot + rot_z));
  op -= (cplx(a.ax) * g.alpha1 + cplx(a.ay) * g.alpha2) * rot;
  op += g.beta * rot;

  const Spinor4 res = op * st.spinor.psi;
  return res.norm() / st.spinor.psi.norm();  // the rotation is unitary
}

double residual_check(const LabState& st, std::span<const SpacetimePoint> pts, Exec exec) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> r(pts.size());
  for_each_index(n, exec, [&](int k) { r[k] = dirac_residual(st, pts[k]); });
  double worst = 0.0;
  for (double v : r) worst = std::isnan(v) ? std::numeric_limits<double>::infinity() : std::max(worst, v);
  return worst;
}

std::vector<SpacetimePoint> sample_points(std::uint64_t seed, int count, double d) {
  if (!(d > 0.0)) throw DomainError("sample_points: d must be positive");
  std::mt19937_64 gen(seed);
  const double half = 4.0 / std::sqrt(d);
  std::uniform_real_distribution<double> transverse(-half, half);
  std::uniform_real_distribution<double> axial(-10.0, 10.0);
  std::vector<SpacetimePoint> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double x = transverse(gen);
    const double y = transverse(gen);
    const double z = axial(gen);
    const double t = axial(gen);
    pts.push_back({x, y, z, t});
  }
  return pts;
}

ConventionScan scan_conventions(const ModelParams& m, double e_root,
                                std::span<const SpacetimePoint> pts) {
  ConventionScan scan;
  scan.best_residual = std::numeric_limits<double>::infinity();
  for (int rot : {+1, -1}) {
    for (int pol : {+1, -1}) {
      const Convention c{rot, pol};
      const double r = residual_check(make_lab_state(m, e_root, c), pts);
      scan.results.push_back({c, r});
      if (r < scan.best_residual) {
        scan.best_residual = r;
        scan.best = c;
      }
    }
  }
  return scan;
}

}  // namespace rotloc
