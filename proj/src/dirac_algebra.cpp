#include "rotloc/dirac_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "rotloc/errors.hpp"

namespace rotloc {

double Spinor4::norm2() const {
  double s = 0.0;
  for (const auto& x : c) s += std::norm(x);
  return s;
}

double Spinor4::norm() const { return std::sqrt(norm2()); }

Spinor4 operator+(const Spinor4& a, const Spinor4& b) {
  Spinor4 r;
  for (int i = 0; i < 4; ++i) r[i] = a[i] + b[i];
  return r;
}

Spinor4 operator-(const Spinor4& a, const Spinor4& b) {
  Spinor4 r;
  for (int i = 0; i < 4; ++i) r[i] = a[i] - b[i];
  return r;
}

Spinor4 operator*(cplx s, const Spinor4& a) {
  Spinor4 r;
  for (int i = 0; i < 4; ++i) r[i] = s * a[i];
  return r;
}

cplx inner(const Spinor4& a, const Spinor4& b) {
  cplx s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

Matrix4C Matrix4C::identity() { return diagonal(1.0, 1.0, 1.0, 1.0); }

Matrix4C Matrix4C::diagonal(cplx a, cplx b, cplx c, cplx d) {
  Matrix4C m;
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

Matrix4C& Matrix4C::operator+=(const Matrix4C& o) {
  for (int i = 0; i < 16; ++i) a_[i] += o.a_[i];
  return *this;
}

Matrix4C& Matrix4C::operator-=(const Matrix4C& o) {
  for (int i = 0; i < 16; ++i) a_[i] -= o.a_[i];
  return *this;
}

Matrix4C& Matrix4C::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

cplx Matrix4C::trace() const {
  return a_[0] + a_[5] + a_[10] + a_[15];
}

cplx Matrix4C::determinant() const {
  // Gaussian elimination with partial pivoting on a copy.
  std::array<cplx, 16> m = a_;
  cplx det = 1.0;
  for (int k = 0; k < 4; ++k) {
    int piv = k;
    for (int r = k + 1; r < 4; ++r) {
      if (std::abs(m[4 * r + k]) > std::abs(m[4 * piv + k])) piv = r;
    }
    if (m[4 * piv + k] == cplx(0.0)) return 0.0;
    if (piv != k) {
      for (int j = 0; j < 4; ++j) std::swap(m[4 * k + j], m[4 * piv + j]);
      det = -det;
    }
    det *= m[4 * k + k];
    for (int r = k + 1; r < 4; ++r) {
      const cplx f = m[4 * r + k] / m[4 * k + k];
      for (int j = k; j < 4; ++j) m[4 * r + j] -= f * m[4 * k + j];
    }
  }
  return det;
}

Matrix4C Matrix4C::adjoint() const {
  Matrix4C r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

double Matrix4C::max_abs() const {
  double m = 0.0;
  for (const auto& x : a_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix4C::norm_1() const {
  double best = 0.0;
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

Matrix4C operator*(const Matrix4C& a, const Matrix4C& b) {
  Matrix4C r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const cplx aik = a(i, k);
      for (int j = 0; j < 4; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Spinor4 operator*(const Matrix4C& a, const Spinor4& v) {
  Spinor4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += a(i, j) * v[j];
  return r;
}

const Matrix4C& DiracMatrices::alpha(int k) const {
  switch (k) {
    case 1: return alpha1;
    case 2: return alpha2;
    case 3: return alpha3;
    default: throw DomainError("alpha index must be 1, 2 or 3");
  }
}

namespace {

DiracMatrices build_dirac() {
  const cplx i(0.0, 1.0);
  // Pauli blocks placed off-diagonal.
  auto off = [](cplx s00, cplx s01, cplx s10, cplx s11) {
    Matrix4C m;
    m(0, 2) = s00; m(0, 3) = s01; m(1, 2) = s10; m(1, 3) = s11;
    m(2, 0) = s00; m(2, 1) = s01; m(3, 0) = s10; m(3, 1) = s11;
    return m;
  };
  DiracMatrices d;
  d.alpha1 = off(0.0, 1.0, 1.0, 0.0);
  d.alpha2 = off(0.0, -i, i, 0.0);
  d.alpha3 = off(1.0, 0.0, 0.0, -1.0);
  d.beta = Matrix4C::diagonal(1.0, 1.0, -1.0, -1.0);
  return d;
}

}  // namespace

const DiracMatrices& dirac_matrices() {
  static const DiracMatrices d = build_dirac();
  return d;
}

Matrix4C mat_exp(const Matrix4C& m) {
  const double norm = m.norm_1();
  if (!std::isfinite(norm) || norm > kMatExpNormCap) {
    throw DomainError("mat_exp: matrix norm exceeds cap");
  }
  // Scale so that the Taylor tail beyond order 18 is below 1e-17.
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++squarings;
  }
  const Matrix4C a = std::ldexp(1.0, -squarings) * m;
  constexpr int kOrder = 18;
  // Horner form of sum a^k / k!.
  Matrix4C result = Matrix4C::identity();
  for (int k = kOrder; k >= 1; --k) {
    result = Matrix4C::identity() + cplx(1.0 / k) * (a * result);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

BoostOperator boost_operator(double phi, double phi1) {
  const auto& g = dirac_matrices();
  const Matrix4C gen = cplx(0.5 * phi1) * (g.alpha2 * g.alpha3) + cplx(0.5 * phi) * g.alpha2;
  BoostOperator out;
  out.p = mat_exp(gen);
  out.p_tilde = g.beta * out.p * g.beta;
  return out;
}

BoostAngles boost_angles(double r, double omega_n) {
  const double x = r * omega_n;
  if (!(x * x < 1.0)) {
    throw DomainError("r^2 Omega^2 >= 1: radius beyond lambda/2pi");
  }
  return {std::atanh(x), std::asin(-x)};
}

}  // namespace rotloc
