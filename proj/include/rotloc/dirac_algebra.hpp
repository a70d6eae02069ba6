#pragma once

#include <array>
#include <complex>

namespace rotloc {

using cplx = std::complex<double>;

struct Spinor4 {
  std::array<cplx, 4> c{};

  cplx& operator[](int i) { return c[i]; }
  const cplx& operator[](int i) const { return c[i]; }

  double norm2() const;  // sum |c_i|^2
  double norm() const;
};

Spinor4 operator+(const Spinor4& a, const Spinor4& b);
Spinor4 operator-(const Spinor4& a, const Spinor4& b);
Spinor4 operator*(cplx s, const Spinor4& a);
cplx inner(const Spinor4& a, const Spinor4& b);  // a^dagger b

// Row-major 4x4 complex matrix.
class Matrix4C {
 public:
  Matrix4C() = default;

  static Matrix4C identity();
  static Matrix4C zero() { return {}; }
  static Matrix4C diagonal(cplx a, cplx b, cplx c, cplx d);

  cplx& operator()(int r, int col) { return a_[4 * r + col]; }
  const cplx& operator()(int r, int col) const { return a_[4 * r + col]; }

  Matrix4C& operator+=(const Matrix4C& o);
  Matrix4C& operator-=(const Matrix4C& o);
  Matrix4C& operator*=(cplx s);

  cplx trace() const;
  cplx determinant() const;
  Matrix4C adjoint() const;
  double max_abs() const;   // max |entry|
  double norm_1() const;    // max column sum

  friend Matrix4C operator+(Matrix4C a, const Matrix4C& b) { return a += b; }
  friend Matrix4C operator-(Matrix4C a, const Matrix4C& b) { return a -= b; }
  friend Matrix4C operator*(cplx s, Matrix4C a) { return a *= s; }
  friend Matrix4C operator*(const Matrix4C& a, const Matrix4C& b);
  friend Spinor4 operator*(const Matrix4C& a, const Spinor4& v);

 private:
  std::array<cplx, 16> a_{};
};

struct DiracMatrices {
  Matrix4C alpha1, alpha2, alpha3, beta;

  const Matrix4C& alpha(int k) const;  // k = 1, 2, 3
};

// Dirac-Pauli representation: beta = diag(1,1,-1,-1), alpha_k = [[0,s_k],[s_k,0]].
const DiracMatrices& dirac_matrices();

inline constexpr const char* kRepresentation = "dirac-pauli";

// Exponential by scaling and squaring with a Taylor kernel. Throws DomainError
// when the 1-norm exceeds kMatExpNormCap.
Matrix4C mat_exp(const Matrix4C& m);

inline constexpr double kMatExpNormCap = 700.0;

struct BoostOperator {
  Matrix4C p;
  Matrix4C p_tilde;  // beta P beta
};

// P = exp(1/2 alpha2 alpha3 phi1 + 1/2 alpha2 phi) as a single exponential.
BoostOperator boost_operator(double phi, double phi1);

struct BoostAngles {
  double phi;   // rapidity: cosh = 1/sqrt(1 - r^2 W^2)
  double phi1;  // sin = -r W
};

// Angles at cylindrical radius r for normalized frequency omega_n.
// Throws DomainError when r^2 omega_n^2 >= 1.
BoostAngles boost_angles(double r, double omega_n);

}  // namespace rotloc
