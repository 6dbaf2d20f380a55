#include "oracles.hpp"

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/penrose.hpp"
#include "finsler/random.hpp"
#include "finsler/tensors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace finsler;

namespace {

const VectorField kN = VectorField::coordinate(4, 0);

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

RosenProfile cos_profile() {
  return RosenProfile::diagonal({[](double u) { return std::cos(u) * std::cos(u); }, [](double) { return 1.0; }},
                                {[](double u) { return -std::sin(2 * u); }, [](double) { return 0.0; }},
                                {[](double u) { return -2 * std::cos(2 * u); }, [](double) { return 0.0; }});
}

Lagrangian cos_fixture(double cross) {
  RosenFixture fx;
  fx.axes = {RosenAxis::parse("cos2"), RosenAxis::parse("flat")};
  fx.cross_amplitude = cross;
  return build_rosen(fx);
}

std::vector<Vec> small_samples(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_point(Region::cube(4, 0.5), rng));
  return out;
}

}  // namespace

TEST_CASE("constant Rosen profile has a vanishing Brinkmann profile") {
  Mat h(2, 2);
  h << 2.0, 0.3, 0.3, 1.0;
  const BrinkmannProfile b = rosen_to_brinkmann(RosenProfile::constant(h));
  CHECK_FALSE(b.truncated);
  CHECK(b.max_deviation([](double) { return Mat::Zero(2, 2); }) <= 1e-12);
  CHECK(b.orthonormality <= 1e-12);
}

TEST_CASE("cos^2 profile: A = diag(-1, 0) and M = diag(1/cos, 1)") {
  const BrinkmannProfile b = rosen_to_brinkmann(cos_profile());
  REQUIRE(b.u.size() == 41);
  CHECK(b.max_deviation([](double) { return diag2(-1.0, 0.0); }) <= 1e-10);
  for (std::size_t i = 0; i < b.u.size(); ++i) {
    const double u = b.u[i];
    CHECK((b.M[i] - diag2(1 / std::cos(u), 1.0)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((b.Mdot[i] - diag2(std::sin(u) / (std::cos(u) * std::cos(u)), 0.0)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK(b.symmetry <= 1e-10);
  const Table t = b.to_table();
  CHECK(t.columns.front() == "u");
  CHECK(t.rows.size() == b.u.size());
}

TEST_CASE("exponential profile: A = diag(1, 1)") {
  const auto e = [](double u) { return std::exp(2 * u); };
  const auto de = [](double u) { return 2 * std::exp(2 * u); };
  const auto dde = [](double u) { return 4 * std::exp(2 * u); };
  const BrinkmannProfile b = rosen_to_brinkmann(RosenProfile::diagonal({e, e}, {de, de}, {dde, dde}));
  CHECK(b.max_deviation([](double) { return diag2(1.0, 1.0); }) <= 1e-10);
}

TEST_CASE("profile from a Lagrangian matches the fixture and rotates a sheared frame") {
  const RosenProfile p = RosenProfile::from_lagrangian(cos_fixture(0.2));
  for (double u : {-0.7, 0.0, 0.4}) {
    const RosenJet j = p.jet(u);
    CHECK((j.h - diag2(std::cos(u) * std::cos(u), 1.0)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((j.ddh - diag2(-2 * std::cos(2 * u), 0.0)).cwiseAbs().maxCoeff() <= 1e-14);
  }
  // non-diagonal h: the frame must rotate to keep M^T h M' symmetric
  Mat A(2, 2);
  A << -1.0, 0.4, 0.4, 0.5;
  const RosenProfile q = jacobi_rosen([A](double) { return A; }, 2, 0.0, -1.0, 1.0);
  const BrinkmannProfile b = rosen_to_brinkmann(q);
  CHECK(b.max_deviation([A](double) { return A; }) <= 1e-6);
  CHECK(b.symmetry <= 1e-8);
}

TEST_CASE("Brinkmann to Rosen and back recovers A") {
  BrinkmannOptions opt;
  opt.u_min = -1.4;
  opt.u_max = 1.4;
  CHECK(brinkmann_roundtrip([](double) { return diag2(-1.0, 0.0); }, 2, opt).passed());
  CHECK(brinkmann_roundtrip([](double) { return diag2(-1.0, 1.0); }, 2, opt).passed());
  CHECK(brinkmann_roundtrip(
            [](double u) {
              Mat a(2, 2);
              a << std::sin(u), 0.3 * u, 0.3 * u, -0.5;
              return a;
            },
            2, {})
            .passed());
}

TEST_CASE("Brinkmann conversion truncates at a focal point") {
  BrinkmannOptions opt;
  opt.u_min = -1.0;
  opt.u_max = 2.0;
  opt.samples = 61;
  const BrinkmannProfile b = rosen_to_brinkmann(cos_profile(), opt);
  CHECK(b.truncated);
  CHECK(b.truncated_at > 1.5);
  CHECK(b.truncated_at < 1.7);
  CHECK_FALSE(b.note.empty());
  const auto focal = focal_point_between(cos_profile(), 1.55, 1.6);
  REQUIRE(focal.has_value());
  // det h vanishes quadratically, so the location resolves to about sqrt(eps)
  CHECK(std::abs(*focal - std::acos(0.0)) <= 1e-7);
  CHECK_FALSE(focal_point_between(cos_profile(), 0.0, 1.5).has_value());
  for (double u : b.u) CHECK(u < std::acos(0.0));
}

TEST_CASE("rescaling homothety holds exactly up to rounding") {
  const Lagrangian L = cos_fixture(0.2);
  const std::vector<Vec> samples = small_samples(50, 81);
  CHECK(homothety_residual(L, kN, 1.0, samples).max_residual() <= 1e-14);
  for (double omega : {0.5, 0.1}) {
    CAPTURE(omega);
    const Report r = homothety_residual(L, kN, omega, samples);
    CAPTURE(r.max_residual());
    CHECK(r.passed());
    const Report c = homothety_connection_residual(L, kN, omega, small_samples(10, 82));
    CAPTURE(c.max_residual());
    CHECK(c.passed());
  }
  CHECK(limit_decay_check(L, kN, samples).passed());
  CHECK_THROWS_AS(homothety_residual(L, kN, 0.0, samples), DomainError);
  CHECK_THROWS_AS(homothety_residual(L, kN, 0.5, {Vec::Constant(4, 3.0)}), DomainError);
}

TEST_CASE("rescaled metric table has the Rosen limit shape") {
  const Lagrangian L = cos_fixture(0.2);
  Vec xt(4);
  xt << 0.3, 0.2, -0.1, 0.4;
  const Mat g = rescaled_metric(L, kN, xt, 1e-3);
  CHECK(g(0, 0) == 0.0);
  CHECK(g(0, 1) == 1.0);
  CHECK(std::abs(g(1, 1)) <= 1e-5);
  CHECK(std::abs(g(1, 2)) <= 1e-2);
  CHECK(g(2, 2) == doctest::Approx(-std::cos(0.3) * std::cos(0.3)).epsilon(1e-5));
  const Vec w = rescale_weights(4, 0.5);
  CHECK(w(0) == 1.0);
  CHECK(w(1) == 0.25);
  CHECK(w(3) == 0.5);
  CHECK((rescale_to_chart(xt, 0.5) - xt.cwiseProduct(w)).norm() == 0.0);
}

TEST_CASE("plane-wave limit of flat and pp-wave charts is flat") {
  for (const Lagrangian& L : {build_brinkmann_quadratic(WaveProfile::named("zero")), build_sample_ppwave_example()}) {
    CAPTURE(L.name());
    PenroseOptions opt;
    opt.homothety_samples = 10;
    const PenroseLimitResult r = penrose_limit(L, kN, opt);
    CAPTURE(r.report.max_residual());
    CHECK(r.report.passed());
    CHECK((r.rosen.h(0.3) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(r.brinkmann.max_deviation([](double) { return Mat::Zero(2, 2); }) <= 1e-10);
  }
}

TEST_CASE("plane-wave limit of the Rosen fixture") {
  const Lagrangian L = cos_fixture(0.2);
  const PenroseLimitResult r = penrose_limit(L, kN);
  CAPTURE(r.report.max_residual());
  CHECK(r.report.passed());
  CHECK(r.brinkmann.max_deviation([](double) { return diag2(-1.0, 0.0); }) <= 1e-10);
  const RosenProfile lim = RosenProfile::from_lagrangian(r.limit);
  for (double u : {-0.8, 0.0, 0.5}) {
    CHECK((lim.h(u) - diag2(std::cos(u) * std::cos(u), 1.0)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  Vec x(4);
  x << 0.2, 0.5, 0.3, -0.1;
  Vec w(4);
  w << 1.0, 0.7, 0.2, 0.1;
  CHECK(r.limit(x, w) == doctest::Approx(2 * 0.7 - std::cos(0.2) * std::cos(0.2) * 0.04 - 0.01).epsilon(1e-12));
  CHECK(r.homothety.rows.size() == 3);
  const auto& checks = r.report.checks();
  CHECK(std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.check.rfind("limit: ", 0) == 0; }));
}

TEST_CASE("plane-wave limit rejects rays through focal points and bad fields") {
  const Lagrangian L = cos_fixture(0.0).with_region(Region{{{-2.0, 2.0}, {-1, 1}, {-1, 1}, {-1, 1}}});
  PenroseOptions opt;
  opt.brinkmann.u_max = 2.0;
  opt.homothety_samples = 5;
  CHECK_THROWS_AS(penrose_limit(L, kN, opt), DegeneracyError);
  CHECK_THROWS_AS(penrose_limit(build_minkowski(4), kN), PreconditionError);
  CHECK_THROWS_AS(penrose_limit(L, VectorField::coordinate(4, 1)), PreconditionError);
}

TEST_CASE("the limit satisfies the pp-wave condition with d/dx^1") {
  const RosenProfile p = jacobi_rosen([](double u) { return diag2(-1.0 + 0.2 * u, 0.5); }, 2, 0.0, -1.0, 1.0);
  const Lagrangian W = limit_lagrangian(p, -1.0, 1.0);
  Rng rng(83);
  std::vector<Vec> samples;
  for (int i = 0; i < 6; ++i) samples.push_back(sample_point(Region::cube(4, 0.5), rng));
  const Report r = ppwave_condition(W, VectorField::coordinate(4, 1), samples);
  CAPTURE(r.max_residual());
  CHECK(r.status() == ReportStatus::pass);
}
