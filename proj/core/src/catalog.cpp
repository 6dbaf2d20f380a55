#include "finsler/catalog.hpp"

#include "finsler/random.hpp"
#include "finsler/tensors.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

WaveProfile WaveProfile::named(const std::string& name) {
  WaveProfile p;
  if (name == "zero") {
    p.kind = Kind::zero;
  } else if (name == "x2") {
    p.kind = Kind::x2;
  } else if (name == "x2-y2") {
    p.kind = Kind::x2_minus_y2;
  } else if (name == "uxy") {
    p.kind = Kind::uxy;
  } else {
    throw DomainError("unknown wave profile '" + name + "'");
  }
  return p;
}

WaveProfile WaveProfile::quadratic(const Mat& A) {
  if (A.rows() != 2 || A.cols() != 2) throw DomainError("quadratic wave profile needs a 2x2 matrix");
  WaveProfile p;
  p.kind = Kind::quadratic;
  p.A = A;
  return p;
}

std::string WaveProfile::name() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::x2: return "x2";
    case Kind::x2_minus_y2: return "x2-y2";
    case Kind::uxy: return "uxy";
    case Kind::quadratic: return "quadratic";
  }
  return "zero";
}

Eigen::Vector3d WaveProfile::gradient(double u, double x, double y) const {
  switch (kind) {
    case Kind::zero: return Eigen::Vector3d::Zero();
    case Kind::x2: return {0.0, 2.0 * x, 0.0};
    case Kind::x2_minus_y2: return {0.0, 2.0 * x, -2.0 * y};
    case Kind::uxy: return {x * y, u * y, u * x};
    case Kind::quadratic: {
      const Eigen::Matrix2d S = A + A.transpose();
      const Eigen::Vector2d g = S * Eigen::Vector2d(x, y);
      return {0.0, g(0), g(1)};
    }
  }
  return Eigen::Vector3d::Zero();
}

Eigen::Matrix3d WaveProfile::hessian(double u, double x, double y) const {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  switch (kind) {
    case Kind::zero: break;
    case Kind::x2: h(1, 1) = 2.0; break;
    case Kind::x2_minus_y2:
      h(1, 1) = 2.0;
      h(2, 2) = -2.0;
      break;
    case Kind::uxy:
      h << 0.0, y, x, y, 0.0, u, x, u, 0.0;
      break;
    case Kind::quadratic: h.bottomRightCorner<2, 2>() = A + A.transpose(); break;
  }
  return h;
}

namespace {

struct MinkowskiFn {
  template <class T>
  T operator()(std::span<const T> /*x*/, std::span<const T> w) const {
    T r = w[0] * w[0];
    for (std::size_t i = 1; i < w.size(); ++i) r = r - w[i] * w[i];
    return r;
  }
};

struct BrinkmannFn {
  WaveProfile H;
  double sign;

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    const T h = H(x[1], x[2], x[3]);
    return 2.0 * w[0] * w[1] + h * w[1] * w[1] + sign * (w[2] * w[2] + w[3] * w[3]);
  }
};

struct CurvedScreenFn {
  WaveProfile H;
  double K;

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    const T h = H(x[1], x[2], x[3]);
    const T d = 1.0 + K * (x[2] * x[2] + x[3] * x[3]);
    const T psi = 4.0 / (d * d);
    return 2.0 * w[0] * w[1] + h * w[1] * w[1] - psi * (w[2] * w[2] + w[3] * w[3]);
  }
};

/// alpha N + d_u with 2 alpha + g_uu >= 2.
Vec wave_cone_ref(int n, double guu) {
  Vec c = Vec::Zero(n);
  c(0) = std::max(1.0, 1.0 - guu);
  c(1) = 1.0;
  return c;
}

}  // namespace

Lagrangian build_minkowski(int dim) {
  return Lagrangian::from_generic("minkowski", dim, MinkowskiFn{},
                                  [dim](const Vec&) { return unit_vector(dim, 0); });
}

Lagrangian build_brinkmann_quadratic(const WaveProfile& H, TransverseSign sign) {
  const double s = sign == TransverseSign::negative ? -1.0 : 1.0;
  std::string name = "brinkmann[" + H.name() + "]";
  if (sign == TransverseSign::positive) name += "+";
  return Lagrangian::from_generic(name, 4, BrinkmannFn{H, s},
                                  [H](const Vec& x) { return wave_cone_ref(4, H.value(x(1), x(2), x(3))); });
}

RosenAxis RosenAxis::parse(const std::string& kind, double rate) {
  RosenAxis a;
  a.rate = rate;
  if (kind == "flat") {
    a.kind = Kind::flat;
  } else if (kind == "cos2") {
    a.kind = Kind::cos2;
  } else if (kind == "exp2") {
    a.kind = Kind::exp2;
  } else if (kind == "lin2") {
    a.kind = Kind::lin2;
  } else if (kind == "affine") {
    a.kind = Kind::affine;
  } else {
    throw DomainError("unknown Rosen axis kind '" + kind + "'");
  }
  return a;
}

std::string RosenAxis::name() const {
  switch (kind) {
    case Kind::flat: return "flat";
    case Kind::cos2: return "cos2";
    case Kind::exp2: return "exp2";
    case Kind::lin2: return "lin2";
    case Kind::affine: return "affine";
  }
  return "flat";
}

Lagrangian build_rosen(const RosenFixture& fixture) {
  if (fixture.axes.empty()) throw DomainError("Rosen fixture needs at least one transverse axis");
  const int n = fixture.dim();
  std::string name = "rosen[";
  double reach = 1.0;
  for (std::size_t i = 0; i < fixture.axes.size(); ++i) {
    const RosenAxis& a = fixture.axes[i];
    name += (i ? "," : "") + a.name();
    const double r = std::abs(a.rate);
    if (r == 0.0) continue;
    if (a.kind == RosenAxis::Kind::cos2) reach = std::min(reach, 1.2 / r);
    if (a.kind == RosenAxis::Kind::lin2 || a.kind == RosenAxis::Kind::affine) reach = std::min(reach, 0.7 / r);
  }
  name += "]";
  const RosenFixture fx = fixture;
  Lagrangian L = Lagrangian::from_generic(name, n, fx, [fx, n](const Vec& x) {
    return wave_cone_ref(n, fx.g11(std::span<const double>(x.data(), static_cast<std::size_t>(n))));
  });
  Region region = Region::cube(n, 1.0);
  region.bounds[0] = {-reach, reach};
  return L.with_region(region);
}

Lagrangian build_curved_screen(double gaussian_curvature, const WaveProfile& H) {
  if (gaussian_curvature < 0.0) throw DomainError("curved screen needs a non-negative curvature");
  const CurvedScreenFn fn{H, gaussian_curvature};
  return Lagrangian::from_generic("curved_screen", 4, fn,
                                  [H](const Vec& x) { return wave_cone_ref(4, H.value(x(1), x(2), x(3))); });
}

Lagrangian build_sample_parallel_example(double amplitude, double drift) {
  if (amplitude < 0.0 || amplitude > 0.5 || std::abs(drift) > 0.6) {
    throw ConstructionError("parallel example parameters outside the range where F is a Finsler norm");
  }
  return build_parallel_example(SampleRandersNorm4{amplitude, drift}, 4, "parallel_example");
}

Lagrangian build_sample_ppwave_example(double amplitude, double drift) {
  if (amplitude < 0.0 || amplitude > 1.0 || std::abs(drift) > 0.6) {
    throw ConstructionError("pp-wave example parameters outside the range where F is a Finsler norm");
  }
  return build_ppwave_example(SampleRandersNorm2{amplitude, drift}, 4, "ppwave_example");
}

Report lightlike_form_consistency(const Lagrangian& L, int samples, std::uint64_t seed) {
  Report r("lightlike form consistency");
  r.set_seed(seed);
  Rng rng(seed);
  const int n = L.dim();
  const Vec N = unit_vector(n, 0);
  double r00 = 0.0;
  double r01 = 0.0;
  double r0a = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_point(L.region(), rng);
    const Mat g = fundamental_matrix(L, x, N);
    r00 = std::max(r00, std::abs(g(0, 0)));
    r01 = std::max(r01, std::abs(g(0, 1) - 1.0));
    for (int a = 2; a < n; ++a) r0a = std::max(r0a, std::abs(g(0, a)));
  }
  r.add("g_N(N, N) = 0", r00, 1e-10);
  r.add("g_N(N, d_1) = 1", r01, 1e-10);
  r.add("g_N(N, d_a) = 0", r0a, 1e-10);
  return r;
}

std::vector<Lagrangian> builtin_catalog() {
  std::vector<Lagrangian> out;
  out.push_back(build_minkowski(4));
  for (const char* h : {"zero", "x2", "x2-y2", "uxy"}) out.push_back(build_brinkmann_quadratic(WaveProfile::named(h)));
  out.push_back(build_sample_parallel_example());
  out.push_back(build_sample_ppwave_example());
  RosenFixture cos_fixture;
  cos_fixture.axes = {RosenAxis::parse("cos2"), RosenAxis::parse("flat")};
  cos_fixture.cross_amplitude = 0.2;
  out.push_back(build_rosen(cos_fixture));
  out.push_back(build_curved_screen(1.0, WaveProfile::named("x2")));
  return out;
}

}  // namespace finsler
