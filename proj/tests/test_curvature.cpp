#include "oracles.hpp"

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/random.hpp"
#include "finsler/tensors.hpp"

#include <doctest.h>

#include <cmath>

using namespace finsler;

namespace {

Vec v4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

const VectorField kN = VectorField::coordinate(4, 0);

std::vector<Vec> sample_points(const Lagrangian& L, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_point(L.region(), rng));
  return out;
}

}  // namespace

TEST_CASE("H = x^2: R(dx, du) du in both transverse sign conventions") {
  const Vec x = v4(0.1, 0.2, 0.3, -0.1);
  const Vec dx = unit_vector(4, 2);
  const Vec du = unit_vector(4, 1);
  const WaveProfile H = WaveProfile::named("x2");

  const Lagrangian Lm = build_brinkmann_quadratic(H, TransverseSign::negative);
  const Vec rm = field_curvature(Lm, kN, x).apply(dx, du, du);
  CHECK(rm(2) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(rm(0)) + std::abs(rm(1)) + std::abs(rm(3)) <= 1e-7);

  const Lagrangian Lp = build_brinkmann_quadratic(H, TransverseSign::positive);
  const Vec rp = field_curvature(Lp, kN, x).apply(dx, du, du);
  CHECK(rp(2) == doctest::Approx(-1.0).epsilon(1e-7));

  for (const TransverseSign sign : {TransverseSign::negative, TransverseSign::positive}) {
    const double s = static_cast<double>(static_cast<int>(sign));
    const Lagrangian L = build_brinkmann_quadratic(H, sign);
    const Tensor4 oracle_R = oracle::curvature_from_symbols(
        [&H, s](const Vec& y) { return oracle::brinkmann_symbols([&H](double u, double p, double q) { return H.value(u, p, q); }, y, s); },
        x, 1e-3);
    CHECK((field_curvature(L, kN, x).R - oracle_R).max_abs() <= 1e-6);
  }
}

TEST_CASE("H = x^2 - y^2: only the du du tidal components survive") {
  const Lagrangian L = build_brinkmann_quadratic(WaveProfile::named("x2-y2"));
  const Vec x = v4(0.0, 0.4, 0.2, 0.5);
  const CurvatureAt R = field_curvature(L, kN, x);
  const Vec du = unit_vector(4, 1);
  CHECK(R.apply(unit_vector(4, 2), du, du)(2) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(R.apply(unit_vector(4, 3), du, du)(3) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(std::abs(R.apply(unit_vector(4, 2), unit_vector(4, 3), du)(2)) <= 1e-7);
  CHECK(std::abs(R.apply(unit_vector(4, 2), unit_vector(4, 3), unit_vector(4, 2))(3)) <= 1e-7);
  CHECK(R.apply(unit_vector(4, 0), du, du).norm() <= 1e-7);
}

TEST_CASE("curvature of the Finsler examples agrees with differences of the symbol field") {
  for (const Lagrangian& L : {build_sample_parallel_example(), build_sample_ppwave_example()}) {
    CAPTURE(L.name());
    Rng rng(51);
    const Vec x = sample_point(L.region(), rng);
    const Vec v = sample_admissible(L, x, rng);
    const VectorField V = parallel_extension(L, v, x);
    const Tensor4 expected = oracle::curvature_from_symbols([&](const Vec& y) { return christoffel(L, V, y).gamma; }, x, 1e-3);
    CHECK((field_curvature(L, V, x).R - expected).max_abs() <= 1e-5);
    CHECK((chern_curvature(L, x, v).R - field_curvature(L, V, x).R).max_abs() <= 1e-9);
  }
}

TEST_CASE("curvature is antisymmetric and satisfies the first Bianchi identity") {
  Rng rng(52);
  for (const Lagrangian& L : oracle::catalog()) {
    CAPTURE(L.name());
    const Vec x = sample_point(L.region(), rng);
    const Vec v = sample_admissible(L, x, rng);
    const CurvatureAt R = chern_curvature(L, x, v);
    const int n = L.dim();
    const double scale = std::max(1.0, R.R.max_abs());
    double anti = 0.0;
    double bianchi = 0.0;
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            anti = std::max(anti, std::abs(R.R(l, i, j, k) + R.R(l, j, i, k)));
            bianchi = std::max(bianchi, std::abs(R.R(l, i, j, k) + R.R(l, j, k, i) + R.R(l, k, i, j)));
          }
        }
      }
    }
    CHECK(anti <= 1e-12 * scale);
    CHECK(bianchi <= 1e-6 * scale);
  }
}

TEST_CASE("lowered curvature is antisymmetric in the last pair for metric connections") {
  const Lagrangian L = build_brinkmann_quadratic(WaveProfile::named("uxy"));
  const Vec x = v4(0.1, 0.5, -0.3, 0.2);
  const CurvatureAt R = field_curvature(L, kN, x);
  const Tensor4 Rm = lowered_curvature(R, fundamental_matrix(L, x, L.cone_ref(x)));
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) worst = std::max(worst, std::abs(Rm(i, j, k, l) + Rm(i, j, l, k)));
      }
    }
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("screen basis spans N-perp and is orthonormal for -g") {
  const Lagrangian L = build_sample_ppwave_example();
  const Vec x = v4(0.0, 0.2, 0.1, -0.3);
  const Mat g = fundamental_matrix(L, x, unit_vector(4, 0));
  const Mat B = screen_basis(g, unit_vector(4, 0));
  REQUIRE(B.cols() == 3);
  CHECK(((g * unit_vector(4, 0)).transpose() * B).cwiseAbs().maxCoeff() <= 1e-12);
  const Mat G = -B.rightCols(2).transpose() * g * B.rightCols(2);
  CHECK((G - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pp-wave condition holds on wave charts and fails on a curved screen") {
  for (const char* name : {"zero", "x2", "x2-y2", "uxy"}) {
    CAPTURE(name);
    const Lagrangian L = build_brinkmann_quadratic(WaveProfile::named(name));
    const Report r = ppwave_condition(L, kN, sample_points(L, 8, 53));
    CAPTURE(r.max_residual());
    CHECK(r.status() == ReportStatus::pass);
  }
  const Lagrangian P = build_sample_ppwave_example();
  CHECK(ppwave_condition(P, kN, sample_points(P, 8, 54)).status() == ReportStatus::pass);

  const Lagrangian C = build_curved_screen(1.0, WaveProfile::named("x2"));
  const Report bad = ppwave_condition(C, kN, sample_points(C, 8, 55));
  CHECK(bad.status() == ReportStatus::fail);
  CHECK(bad.max_residual() > 1e-3);
}

TEST_CASE("pp-wave condition reports a precondition failure for a timelike field") {
  const Lagrangian L = build_minkowski(4);
  const Report r = ppwave_condition(L, kN, {Vec::Zero(4)});
  CHECK(r.status() == ReportStatus::precondition_failed);
}
