#include "oracles.hpp"

#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/jets.hpp"
#include "finsler/random.hpp"
#include "finsler/tensors.hpp"

#include <doctest.h>

#include <cmath>
#include <span>

using namespace finsler;

namespace {

Vec v4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

/// f = alpha . x + c (x^2)^2 + d x^1 x^3
struct TestPotential {
  Vec alpha;
  double c = 0.1;
  double d = 0.05;

  template <class T>
  T operator()(std::span<const T> x) const {
    T s = c * x[2] * x[2] + d * x[1] * x[3];
    for (std::size_t i = 0; i < x.size(); ++i) s = s + alpha(static_cast<Eigen::Index>(i)) * x[i];
    return s;
  }
};

}  // namespace

TEST_CASE("connection report passes on the catalog with parallel and constant fields") {
  Rng rng(41);
  for (const Lagrangian& L : oracle::catalog()) {
    CAPTURE(L.name());
    for (int s = 0; s < 5; ++s) {
      const Vec x = sample_point(L.region(), rng);
      const Vec v = sample_admissible(L, x, rng);
      const Report a = connection_report(L, parallel_extension(L, v, x), x);
      CAPTURE(a.max_residual());
      CHECK(a.passed());
      const Report b = connection_report(L, VectorField::constant(v), x);
      CAPTURE(b.max_residual());
      CHECK(b.passed());
    }
  }
}

TEST_CASE("quadratic Lagrangians: symbols equal the Levi-Civita oracle") {
  Rng rng(42);
  for (const Lagrangian& L : oracle::catalog()) {
    const Vec x = sample_point(L.region(), rng);
    const Vec c = L.cone_ref(x);
    const Vec v = sample_admissible(L, x, rng);
    if ((fundamental_matrix(L, x, c) - fundamental_matrix(L, x, v)).cwiseAbs().maxCoeff() > 1e-12) continue;
    CAPTURE(L.name());
    const Tensor3 expected =
        oracle::christoffel_from_metric(oracle::polarized_metric(L, x), oracle::polarized_metric_derivative(L, x));
    CHECK((christoffel(L, x, v).gamma - expected).max_abs() <= 1e-10);
    const Tensor3 rough = oracle::christoffel_from_metric(oracle::fd_metric(L, x, v), oracle::fd_metric_derivative(L, x, v));
    CHECK((christoffel(L, x, v).gamma - rough).max_abs() <= 1e-6);
    CHECK((levi_civita(fundamental_matrix(L, x, v), metric_base_derivative(L, x, v)) - christoffel(L, x, v).gamma).max_abs() <= 1e-13);
  }
}

TEST_CASE("Brinkmann symbols match the hand list") {
  for (const char* name : {"zero", "x2", "x2-y2", "uxy"}) {
    CAPTURE(name);
    const WaveProfile H = WaveProfile::named(name);
    for (const TransverseSign sign : {TransverseSign::negative, TransverseSign::positive}) {
      const Lagrangian L = build_brinkmann_quadratic(H, sign);
      const double s = static_cast<double>(static_cast<int>(sign));
      const Vec x = v4(0.2, 0.4, -0.3, 0.6);
      const Tensor3 hand = oracle::brinkmann_symbols(
          [&H](double u, double p, double q) { return H.value(u, p, q); }, x, s);
      CHECK((christoffel(L, x, L.cone_ref(x)).gamma - hand).max_abs() <= 1e-9);
    }
  }
}

TEST_CASE("Chern symbols depend on V only through V(x) and are symmetric") {
  const Lagrangian L = build_sample_parallel_example();
  Rng rng(43);
  const Vec x = sample_point(L.region(), rng);
  const Vec v = sample_admissible(L, x, rng);
  const ChristoffelTable a = christoffel(L, x, v);
  const ChristoffelTable b = christoffel(L, parallel_extension(L, v, x), x);
  CHECK((a.gamma - b.gamma).max_abs() <= 1e-12);
  ChristoffelOptions dense;
  dense.force_dense = true;
  CHECK((christoffel(L, x, v, dense).gamma - a.gamma).max_abs() <= 1e-10);
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) CHECK(a.gamma(k, i, j) == a.gamma(k, j, i));
    }
  }
  CHECK((a.contract(v, v) - spray(L, x, v)).norm() <= 1e-10 * std::max(1.0, v.squaredNorm()));
}

TEST_CASE("gradient of u on a wave chart is d/dv") {
  for (const Lagrangian& L : {build_brinkmann_quadratic(WaveProfile::named("x2-y2")), build_sample_ppwave_example(),
                              build_sample_parallel_example()}) {
    CAPTURE(L.name());
    const Vec x = v4(0.1, 0.3, -0.2, 0.4);
    const Vec w = gradient(L, ScalarField::coordinate(1), x);
    CHECK((w - unit_vector(4, 0)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("gradient converges to the same vector from 8 seeds") {
  const Lagrangian L = build_sample_parallel_example();
  Rng rng(44);
  const Vec x = sample_point(L.region(), rng);
  const Vec target = sample_admissible(L, x, rng);
  // f whose differential at x is the Legendre image of target
  const Vec df = 0.5 * fiber_gradient(L, x, target);
  const TestPotential pot{df, 0.0, 0.0};
  const ScalarField f = ScalarField::from_generic(pot);
  std::vector<Vec> sols;
  for (int s = 0; s < 8; ++s) {
    GradientOptions opt;
    opt.seed = sample_admissible(L, x, rng, 0.8) * rng.uniform(0.3, 3.0);
    sols.push_back(solve_gradient(L, f, x, opt).w);
  }
  for (std::size_t i = 0; i < sols.size(); ++i) {
    CHECK((sols[i] - target).norm() <= 1e-8);
    for (std::size_t j = 0; j < i; ++j) CHECK((sols[i] - sols[j]).norm() <= 1e-8);
  }
}

TEST_CASE("Hessian identity: H^f(X, Y) = g(nabla_X grad f, Y)") {
  const Lagrangian L = build_sample_parallel_example();
  Rng rng(45);
  const Vec x = sample_point(L.region(), rng);
  const Vec target = sample_admissible(L, x, rng);
  const ScalarField f = ScalarField::from_generic(TestPotential{0.5 * fiber_gradient(L, x, target)});
  const VectorField W = gradient_field(L, f);
  const Vec w = W(x);
  const Mat H = hessian(L, f, x, w);
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  const Mat g = fundamental_matrix(L, x, w);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec nab = covariant_derivative(L, W, x, unit_vector(4, i), W);
    const Vec row = g * nab;
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(row(j) - H(i, j)));
  }
  CHECK(worst <= 1e-8);

  // implicit-differentiation Jacobian against differences of the field
  const Mat J = W.jacobian_at(x);
  const double h = 1e-5;
  for (int i = 0; i < 4; ++i) {
    const Vec e = h * unit_vector(4, i);
    CHECK(((W(x + e) - W(x - e)) / (2 * h) - J.col(i)).norm() <= 1e-7);
  }
}

TEST_CASE("gradient flow of a lightlike coordinate is geodesic") {
  for (const Lagrangian& L : {build_brinkmann_quadratic(WaveProfile::named("x2-y2")),
                              build_brinkmann_quadratic(WaveProfile::named("uxy")), build_sample_ppwave_example()}) {
    CAPTURE(L.name());
    const VectorField W = gradient_field(L, ScalarField::coordinate(1));
    Rng rng(46);
    for (int s = 0; s < 5; ++s) {
      const Vec x = sample_point(L.region(), rng);
      CHECK(covariant_derivative(L, W, x, W(x), W).norm() <= 1e-7);
    }
  }
}

TEST_CASE("pointwise-parallel extension has vanishing covariant derivative at p") {
  Rng rng(47);
  for (const Lagrangian& L : oracle::catalog()) {
    CAPTURE(L.name());
    const Vec p = sample_point(L.region(), rng);
    const Vec v = sample_admissible(L, p, rng);
    const VectorField V = parallel_extension(L, v, p);
    CHECK((V(p) - v).norm() == 0.0);
    CHECK(parallel_residual(L, V, p) <= 1e-10 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("geodesics of H = x^2 - y^2 follow cos and cosh") {
  const Lagrangian L = build_brinkmann_quadratic(WaveProfile::named("x2-y2"));
  const Vec x0 = v4(0.0, 0.0, 0.1, 0.2);
  const Vec v0 = v4(0.5, 1.0, 0.0, 0.0);
  const GeodesicPath path = geodesic(L, x0, v0, 0.0, 1.0, 1e-11);
  REQUIRE_FALSE(path.truncated);
  double worst = 0.0;
  for (const GeodesicSample& s : path.samples) {
    worst = std::max(worst, std::abs(s.x(1) - s.t));
    worst = std::max(worst, std::abs(s.x(2) - 0.1 * std::cos(s.t)));
    worst = std::max(worst, std::abs(s.x(3) - 0.2 * std::cosh(s.t)));
  }
  CHECK(worst <= 1e-8);
  for (double d : path.drift) CHECK(std::abs(d) <= 1e-8);
  const GeodesicSample mid = path.at(0.5);
  CHECK(mid.x(2) == doctest::Approx(0.1 * std::cos(0.5)).epsilon(1e-7));
}

TEST_CASE("geodesics conserve L on the Finsler examples") {
  for (const Lagrangian& L : {build_sample_parallel_example(), build_sample_ppwave_example()}) {
    CAPTURE(L.name());
    Rng rng(48);
    const Vec x0 = 0.2 * sample_point(L.region(), rng);
    const Vec v0 = sample_admissible(L, x0, rng);
    const GeodesicPath path = geodesic(L, x0, 0.5 * v0, 0.0, 1.0);
    for (double d : path.drift) CHECK(std::abs(d) <= 1e-7 * std::max(1.0, path.lagrangian0));
  }
}
