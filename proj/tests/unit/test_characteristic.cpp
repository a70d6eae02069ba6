#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rotloc/characteristic.hpp"
#include "rotloc/errors.hpp"

using namespace rotloc;
using cd = std::complex<double>;

namespace {

// Eigenvalues of the companion matrix of
// E^3 + (b - e0) E^2 - (1 + b e0 + h^2) E + e0.
std::vector<cd> companion_roots(double e0, double h, double b) {
  const double a2 = b - e0, a1 = -(1.0 + b * e0 + h * h), a0 = e0;
  Eigen::Matrix3d m;
  m << -a2, -a1, -a0, 1, 0, 0, 0, 1, 0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(m, false);
  std::vector<cd> out;
  for (int k = 0; k < 3; ++k) out.push_back(es.eigenvalues()[k]);
  return out;
}

// Largest distance after greedily pairing each solver root with the nearest oracle root.
double multiset_distance(const std::array<cd, 3>& got, std::vector<cd> want) {
  double worst = 0.0;
  for (const cd& g : got) {
    auto it = std::min_element(want.begin(), want.end(), [&](const cd& a, const cd& b) {
      return std::abs(a - g) < std::abs(b - g);
    });
    worst = std::max(worst, std::abs(*it - g));
    want.erase(it);
  }
  return worst;
}

}  // namespace

TEST_SUITE("characteristic") {
  TEST_CASE("h = 0 at the singular momentum: double root e0 and -1/e0") {
    for (double e0 : {0.5, 1.0, 2.0, 5.0}) {
      const CharRoots r = solve_characteristic({e0, 0.0, singular_b(e0)});
      CHECK(r.classification == RootClass::singular_pair);
      CHECK(std::abs(r.roots[0] - cd(-1.0 / e0)) <= 1e-12);
      CHECK(std::abs(r.roots[1] - cd(e0)) <= 1e-12);
      CHECK(std::abs(r.roots[2] - cd(e0)) <= 1e-12);
    }
    const CharRoots r = solve_characteristic({1.0, 0.0, 0.0});
    CHECK(r.roots[0] == cd(-1.0));
    CHECK(r.roots[1] == cd(1.0));
    CHECK(r.roots[2] == cd(1.0));
  }

  TEST_CASE("e0 = 1, h = 0.01 against the companion oracle") {
    const CharRoots r = solve_characteristic({1.0, 0.01, 0.0});
    CHECK(multiset_distance(r.roots, companion_roots(1.0, 0.01, 0.0)) <= 1e-12);
    CHECK(r.roots[2].real() == doctest::Approx(1.0 + 0.01 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(r.roots[1].real() == doctest::Approx(1.0 - 0.01 / std::sqrt(2.0)).epsilon(1e-4));
    // The third root moves by e0 h^2 / (1 + e0^2)^2 = 2.5e-5, not 5e-5.
    CHECK(r.roots[0].real() == doctest::Approx(-1.000025).epsilon(1e-10));
    CHECK(std::abs(r.roots[0].real() - (-1.00005)) > 1e-5);
  }

  TEST_CASE("roots agree with the companion oracle on random inputs") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> le0(-1.0, 1.0), lh(-5.0, -0.5), ub(-4.0, 4.0);
    for (int k = 0; k < 2000; ++k) {
      const double e0 = std::pow(10.0, le0(gen));
      const double h = std::pow(10.0, lh(gen));
      const double b = ub(gen);
      const CharRoots r = solve_characteristic({e0, h, b});
      const auto oracle = companion_roots(e0, h, b);
      double scale = 1.0;
      for (const cd& z : oracle) scale = std::max(scale, std::abs(z));
      // Loose enough for the oracle's own loss of accuracy at clustered roots.
      CHECK(multiset_distance(r.roots, oracle) <= 1e-8 * scale);
      for (double res : r.residuals) CHECK(res <= 1e-12);
      // The cleared cubic interlaces with (E - e0)(E^2 + bE - 1): all roots real.
      for (const cd& z : r.roots) CHECK(z.imag() == 0.0);
    }
  }

  TEST_CASE("Vieta relations") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> ue0(0.2, 6.0), uh(0.0, 0.3), ub(-3.0, 3.0);
    for (int k = 0; k < 500; ++k) {
      const double e0 = ue0(gen), h = uh(gen), b = ub(gen);
      const auto r = solve_characteristic({e0, h, b}).roots;
      const cd s1 = r[0] + r[1] + r[2];
      const cd s2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
      const cd s3 = r[0] * r[1] * r[2];
      const double tol = 1e-12 * (1.0 + std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]));
      CHECK(std::abs(s1 - cd(e0 - b)) <= tol * 4);
      CHECK(std::abs(s2 - cd(-(1.0 + b * e0 + h * h))) <= tol * 8);
      CHECK(std::abs(s3 - cd(-e0)) <= tol * 8);
    }
  }

  TEST_CASE("singular pair: residual, symmetry and slope") {
    for (double e0 : {0.5, 1.0, 2.0, 5.0}) {
      const double slope = e0 / std::sqrt(e0 * e0 + 1);
      double prev_err = 1.0;
      for (double h : {1e-2, 1e-3, 1e-4}) {
        const CharRoots r = solve_characteristic({e0, h, singular_b(e0)});
        REQUIRE(r.classification == RootClass::singular_pair);
        CHECK(r.pair_slope == doctest::Approx(slope));
        for (double res : r.residuals) CHECK(res <= 1e-12);
        const double ep = singular_root(r, e0, +1), em = singular_root(r, e0, -1);
        CHECK(ep > e0);
        CHECK(em < e0);
        // Odd orders cancel across the pair.
        CHECK(std::abs((ep - e0) + (em - e0)) <= 2 * h * h);
        const double err = std::abs((ep - e0) / h - slope);
        CHECK(err <= 5 * h);
        CHECK(err < prev_err);
        prev_err = err;
      }
    }
  }

  TEST_CASE("slope error is linear in h") {
    const double e0 = 2.0, slope = e0 / std::sqrt(5.0);
    auto err = [&](double h) {
      const CharRoots r = solve_characteristic({e0, h, singular_b(e0)});
      return (singular_root(r, e0, +1) - e0) / h - slope;
    };
    const double ratio = err(1e-3) / err(5e-4);
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-2));
  }

  TEST_CASE("third root expansion") {
    for (double e0 : {0.5, 1.0, 2.0, 5.0}) {
      for (double h : {1e-2, 1e-3, 1e-4}) {
        const auto oracle = companion_roots(e0, h, singular_b(e0));
        const double third = std::min_element(oracle.begin(), oracle.end(),
                                              [](const cd& a, const cd& b) { return a.real() < b.real(); })
                                 ->real();
        const CharRoots r = solve_characteristic({e0, h, singular_b(e0)});
        CHECK(r.roots[0].real() == doctest::Approx(third).epsilon(1e-12));
        CHECK(std::abs(r.roots[0].real() - third_root_expansion(e0, h)) <= 5 * std::pow(h, 4));
      }
    }
  }

  TEST_CASE("first order expansion") {
    const auto a = singular_expansion(1.0, 0.0);
    CHECK(a.e_plus == 1.0);
    CHECK(a.e_minus == 1.0);
    const auto b = singular_expansion(1.0, 0.02);
    CHECK(b.e_plus == doctest::Approx(1.0141421).epsilon(1e-7));
    CHECK(b.e_minus == doctest::Approx(0.9858579).epsilon(1e-7));
    const auto c = singular_expansion(2.0, 0.01);
    CHECK(c.e_plus == doctest::Approx(2.0089443).epsilon(1e-7));
    CHECK(c.e_minus == doctest::Approx(1.9910557).epsilon(1e-7));
    CHECK(c.second_order_coeff == 0.0);
  }

  TEST_CASE("fitted second order coefficient") {
    for (double e0 : {0.5, 1.0, 2.0, 5.0}) {
      // Hand expansion of the cubic gives E2 = e0 / (2 (1 + e0^2)^2).
      const double expect = e0 / (2 * std::pow(1 + e0 * e0, 2));
      CHECK(fit_second_order_coeff(e0) == doctest::Approx(expect).epsilon(1e-6));
      const double h = 1e-3;
      const auto s = singular_expansion(e0, h, 2);
      const CharRoots r = solve_characteristic({e0, h, singular_b(e0)});
      CHECK(std::abs(s.e_plus - singular_root(r, e0, +1)) <= 10 * std::pow(h, 3));
      CHECK(std::abs(s.e_minus - singular_root(r, e0, -1)) <= 10 * std::pow(h, 3));
    }
  }

  TEST_CASE("gaussian parameters") {
    const double d2_first = std::sqrt(2.0) / 2;
    CHECK(d2_first_order(1.0, +1) == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(d2_first_order(1.0, -1) == doctest::Approx(-0.7071068).epsilon(1e-7));
    const CharRoots r = solve_characteristic({1.0, 0.01, 0.0});
    const GaussianParams g = gaussian_params(1.0, singular_root(r, 1.0, +1), 0.01, 0.01);
    CHECK(g.d == doctest::Approx(0.005));
    CHECK(std::abs(g.d2 - d2_first) <= 0.01);
    double prev = 1.0;
    for (double h : {1e-2, 1e-3, 1e-4, 1e-5}) {
      const CharRoots rr = solve_characteristic({1.0, h, 0.0});
      const double d2 = gaussian_params(1.0, singular_root(rr, 1.0, +1), h, 0.01).d2;
      CHECK(std::abs(d2 - d2_first) < prev);
      prev = std::abs(d2 - d2_first);
    }
    CHECK(prev < 1e-5);
    CHECK_THROWS_AS(gaussian_params(1.0, 1.0, 0.0, 0.01), DegenerateError);
    CHECK_THROWS_AS(gaussian_params(1.0, 1.1, 0.01, 0.0), DomainError);
  }

  TEST_CASE("singular model uses the exact root") {
    const SingularModel m = singular_model(1.0, 0.01, 0.02, -1);
    CHECK(m.e_root < 1.0);
    CHECK(m.params.energy == doctest::Approx(m.e_root + m.params.p).epsilon(1e-15));
    CHECK(m.params.p == doctest::Approx(0.01));
    CHECK(m.params.d2 == doctest::Approx(0.01 / (2 * (m.e_root - 1.0))).epsilon(1e-15));
    CHECK(m.params.d2 < 0.0);
    CHECK_THROWS_AS(singular_model(1.0, 0.0, 0.02, 1), DegenerateError);
  }

  TEST_CASE("non-singular configurations") {
    const CharRoots r = solve_characteristic({1.0, 0.01, 0.5});
    CHECK(r.classification == RootClass::generic);
    CHECK_THROWS_AS(singular_root(r, 1.0, +1), DomainError);
    // Nearly coincident roots away from the singular b are flagged.
    const CharRoots near = solve_characteristic({1.0, 0.0, 5e-9});
    CHECK(near.classification == RootClass::generic);
    CHECK(near.ill_conditioned);
    CHECK_FALSE(solve_characteristic({1.0, 0.1, 0.5}).ill_conditioned);
    // The singular tolerance is configurable.
    CHECK(solve_characteristic({1.0, 0.0, 5e-9}, 1e-8).classification == RootClass::singular_pair);
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(solve_characteristic({0.0, 0.01, 0.0}), DomainError);
    CHECK_THROWS_AS(solve_characteristic({1.0, -0.01, 0.0}), DomainError);
    CHECK_THROWS_AS(solve_characteristic({1.0, 0.01, NAN}), DomainError);
    CHECK_THROWS_AS(singular_expansion(1.0, 0.01, 3), DomainError);
  }
}
