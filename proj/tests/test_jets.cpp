#include "oracles.hpp"

#include "finsler/catalog.hpp"
#include "finsler/jets.hpp"
#include "finsler/random.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace finsler;

TEST_CASE("fiber gradient and second fiber jet agree with finite differences on the catalog") {
  Rng rng(11);
  for (const Lagrangian& L : oracle::catalog()) {
    CAPTURE(L.name());
    for (int s = 0; s < 5; ++s) {
      const Vec x = sample_point(L.region(), rng);
      const Vec v = sample_admissible(L, x, rng);
      const int n = L.dim();
      const Vec grad = fiber_gradient(L, x, v);
      const double h = 1e-5;
      for (int i = 0; i < n; ++i) {
        const Vec e = h * unit_vector(n, i);
        const double fd = (L(x, v + e) - L(x, v - e)) / (2 * h);
        CHECK(std::abs(grad(i) - fd) <= 1e-7 * std::max(1.0, std::abs(fd)));
      }
      const Mat g = oracle::fd_metric(L, x, v);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::array<Vec, 2> dirs{unit_vector(n, i), unit_vector(n, j)};
          const double d2 = mixed_derivative(L, x, v, {}, dirs);
          CHECK(std::abs(0.5 * d2 - g(i, j)) <= 1e-7 * std::max(1.0, g.cwiseAbs().maxCoeff()));
        }
      }
    }
  }
}

TEST_CASE("base gradient agrees with finite differences in x") {
  Rng rng(12);
  for (const Lagrangian& L : oracle::catalog()) {
    CAPTURE(L.name());
    const Vec x = sample_point(L.region(), rng);
    const Vec v = sample_admissible(L, x, rng);
    const Vec grad = base_gradient(L, x, v);
    const double h = 1e-5;
    for (int k = 0; k < L.dim(); ++k) {
      const Vec e = h * unit_vector(L.dim(), k);
      const double fd = (L(x + e, v) - L(x - e, v)) / (2 * h);
      CHECK(std::abs(grad(k) - fd) <= 1e-7 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("Brinkmann H = x^2: dL/dx = 2 x (v^u)^2") {
  const Lagrangian L = build_brinkmann_quadratic(WaveProfile::named("x2"));
  Rng rng(3);
  for (int s = 0; s < 10; ++s) {
    const Vec x = sample_point(L.region(), rng);
    const Vec v = rng.normal_vector(4);
    const Vec grad = base_gradient(L, x, v);
    CHECK(grad(2) == doctest::Approx(2 * x(2) * v(1) * v(1)).epsilon(1e-14));
    CHECK(grad(0) == 0.0);
    CHECK(grad(3) == 0.0);
  }
}

TEST_CASE("mixed x-v derivatives match differences of the fiber gradient") {
  const Lagrangian L = build_sample_ppwave_example();
  Rng rng(5);
  const Vec x = sample_point(L.region(), rng);
  const Vec v = sample_admissible(L, x, rng);
  const int n = L.dim();
  const double h = 1e-5;
  for (int k = 0; k < n; ++k) {
    const Vec ek = unit_vector(n, k);
    const Vec fd = (fiber_gradient(L, x + h * ek, v) - fiber_gradient(L, x - h * ek, v)) / (2 * h);
    for (int i = 0; i < n; ++i) {
      const std::array<Vec, 1> xd{ek};
      const std::array<Vec, 1> vd{unit_vector(n, i)};
      CHECK(std::abs(mixed_derivative(L, x, v, xd, vd) - fd(i)) <= 1e-7);
    }
  }
}

TEST_CASE("third fiber jet is symmetric and vanishes for quadratic L") {
  const std::array<Vec, 3> dirs{unit_vector(4, 0), unit_vector(4, 1), unit_vector(4, 2)};
  const Lagrangian Q = build_brinkmann_quadratic(WaveProfile::named("uxy"));
  Vec x(4);
  x << 0.1, 0.2, -0.3, 0.4;
  Vec v(4);
  v << 1.0, 0.5, 0.1, 0.0;
  const Jet3 jq = eval_jet3(Q, x, v, dirs);
  for (double d : jq.d3) CHECK(d == 0.0);

  const Lagrangian F = build_sample_parallel_example();
  Rng rng(9);
  const Vec xf = sample_point(F.region(), rng);
  const Vec vf = sample_admissible(F, xf, rng);
  const Jet3 j = eval_jet3(F, xf, vf, dirs);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(j.second(a, b) == doctest::Approx(j.second(b, a)).epsilon(1e-14));
      for (int c = 0; c < 3; ++c) CHECK(j.third(a, b, c) == doctest::Approx(j.third(c, a, b)).epsilon(1e-12));
    }
  }
  CHECK(j.value == doctest::Approx(F(xf, vf)).epsilon(1e-15));
}

TEST_CASE("jet order limits and cone checks") {
  const Lagrangian L = build_minkowski(4);
  const Vec x = Vec::Zero(4);
  const Vec v = unit_vector(4, 0);
  const std::array<Vec, 3> xd{v, v, v};
  const std::array<Vec, 2> vd{v, v};
  CHECK_THROWS_AS(mixed_derivative(L, x, v, xd, vd), DomainError);
  const std::array<Vec, 4> four{v, v, v, v};
  CHECK_THROWS_AS(eval_jet3(L, x, v, four), DomainError);
  const std::array<Vec, 1> one{v};
  CHECK_THROWS_AS(eval_jet3(L, x, unit_vector(4, 1), one), ConeViolation);
}

TEST_CASE("base jet of the metric entries matches differences of the polarized metric") {
  const Lagrangian L = build_curved_screen(1.0, WaveProfile::named("x2"));
  Vec x(4);
  x << 0.0, 0.1, 0.3, -0.2;
  Vec v(4);
  v << 1.0, 1.0, 0.0, 0.0;
  const std::array<Vec, 1> bd{unit_vector(4, 2)};
  const std::array<Vec, 2> fd_dirs{unit_vector(4, 2), unit_vector(4, 2)};
  const XJet j = eval_xjet(L, x, v, bd, fd_dirs);
  const Tensor3 dg = oracle::polarized_metric_derivative(L, x);
  CHECK(0.5 * j.first(0) == doctest::Approx(dg(2, 2, 2)).epsilon(1e-11));
}
