#include <cmath>
#include <random>

#include "doctest.h"
#include "rotloc/errors.hpp"
#include "rotloc/frame_transform.hpp"

using namespace rotloc;

TEST_SUITE("frame_transform") {
  TEST_CASE("zero frequency is the identity") {
    const CylindricalEvent e{3.0, 0.4, -2.0, 7.0};
    const CylindricalEvent m = to_rotating(e, 0.0);
    CHECK(m.r == e.r);
    CHECK(m.phi == e.phi);
    CHECK(m.z == e.z);
    CHECK(m.t == e.t);
    CHECK(jacobian_det(e, 0.0) == 1.0);
  }

  TEST_CASE("axis points only shift the azimuth") {
    const double w = 0.3;
    const CylindricalEvent e{0.0, 1.2, 4.0, -5.0};
    const CylindricalEvent m = to_rotating(e, w);
    CHECK(m.phi == doctest::Approx(1.2 + 4.0 * w + 5.0 * w).epsilon(1e-15));
    CHECK(m.z == 4.0);
    CHECK(m.t == -5.0);
  }

  TEST_CASE("worked point r = 0.5, Omega = 1") {
    const CylindricalEvent m = to_rotating({0.5, 1.0, 0.0, 0.0}, 1.0);
    CHECK(m.z == doctest::Approx(-0.25 / std::sqrt(0.75)).epsilon(1e-15));
    CHECK(m.z == doctest::Approx(-0.288675).epsilon(1e-6));
    CHECK(m.t == doctest::Approx(-0.288675).epsilon(1e-6));
    CHECK(m.r == 0.5);
  }

  TEST_CASE("matrix form agrees with the written-out map") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0), c(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
      const double w = 0.05 + u(gen);
      const double r = 0.99 * u(gen) / w;
      const double phi = c(gen), z = c(gen), t = c(gen);
      const auto a = apply(transform_matrix(r, w), {phi, z, t});
      const auto b = forward_map(r, w, phi, z, t);
      for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("unit determinant, analytic and finite difference") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0), c(-10.0, 10.0);
    for (int k = 0; k < 2000; ++k) {
      const double w = std::pow(10.0, -3.0 + 3.0 * u(gen));
      const double r = std::sqrt((1.0 - 1e-6) * u(gen)) / w;
      const CylindricalEvent e{r, c(gen), c(gen), c(gen)};
      CHECK(std::abs(jacobian_det(e, w) - 1.0) <= 1e-12);
      CHECK(std::abs(jacobian_det_fd(e, w) - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("determinant stays one as the entries diverge near the boundary") {
    const double w = 0.5;
    double prev_entry = 0.0;
    for (double gap : {1e-2, 1e-4, 1e-6}) {
      const double r = std::sqrt(1.0 - gap) / w;
      const auto m = transform_matrix(r, w);
      CHECK(std::abs(m[2][2]) > prev_entry);
      prev_entry = std::abs(m[2][2]);
      const CylindricalEvent e{r, 0.3, 1.0, 2.0};
      CHECK(std::abs(jacobian_det_fd(e, w) - 1.0) <= 1e-10);
      CHECK(std::abs(jacobian_det(e, w) - 1.0) <= 1e-12);
    }
    CHECK(prev_entry > 900.0);
  }

  TEST_CASE("derived inverse round trips") {
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u(0.0, 1.0), c(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
      const double w = 0.01 + u(gen);
      const double r = std::sqrt(0.999 * u(gen)) / w;
      const CylindricalEvent e{r, c(gen), c(gen), c(gen)};
      const CylindricalEvent back = from_rotating(to_rotating(e, w), w);
      CHECK(back.phi == doctest::Approx(e.phi).epsilon(1e-12).scale(10));
      CHECK(back.z == doctest::Approx(e.z).epsilon(1e-12).scale(10));
      CHECK(back.t == doctest::Approx(e.t).epsilon(1e-12).scale(10));
      CHECK(back.r == e.r);
    }
  }

  TEST_CASE("map with -Omega does not undo the map with Omega") {
    const CylindricalEvent e{0.5, 0.3, 1.0, 2.0};
    const CylindricalEvent back = to_rotating(to_rotating(e, 0.8), -0.8);
    CHECK(std::abs(back.t - e.t) > 1e-3);
  }

  TEST_CASE("sqrt(1 - r^2 Omega^2) decreases with r") {
    const double w = 2.0;
    double prev = 2.0;
    for (int k = 0; k < 1000; ++k) {
      const double r = (k / 1000.0) / w;
      const double g = transform_matrix(r, w)[1][1];
      CHECK(g < prev);
      prev = g;
    }
  }

  TEST_CASE("boundary and beyond are rejected") {
    CHECK_THROWS_AS(to_rotating({1.0, 0, 0, 0}, 1.0), DomainError);
    CHECK_THROWS_AS(to_rotating({2.0, 0, 0, 0}, 1.0), DomainError);
    CHECK_THROWS_AS(jacobian_det({1.0, 0, 0, 0}, 1.0), DomainError);
    CHECK_THROWS_AS(from_rotating({1.5, 0, 0, 0}, 1.0), DomainError);
    try {
      to_rotating({2.0, 0, 0, 0}, 1.0);
    } catch (const DomainError& ex) {
      CHECK(std::string(ex.what()).find("lambda/2pi") != std::string::npos);
    }
  }

  TEST_CASE("maximum radius") {
    CHECK(max_radius(0.01).compton == doctest::Approx(100.0));
    CHECK(max_radius(1.0).compton == 1.0);
    CHECK(max_radius(0.3).of_lambda == doctest::Approx(1.0 / (2 * std::numbers::pi)));
    CHECK(max_radius_physical(1.0) == doctest::Approx(0.159155).epsilon(1e-6));
    CHECK_THROWS_AS(max_radius(0.0), DomainError);
  }
}
