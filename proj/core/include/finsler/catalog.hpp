#pragma once

// Built-in Lagrangians. Coordinates of four-dimensional wave charts are
// ordered (v, u, x, y) with N = d/dv the lightlike direction.

#include "finsler/error.hpp"
#include "finsler/hyperdual.hpp"
#include "finsler/lagrangian.hpp"
#include "finsler/report.hpp"
#include "finsler/types.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace finsler {

/// Sign of the transverse block in 2 dv du + H du^2 + s (dx^2 + dy^2).
/// negative keeps the (+, -, ..., -) signature used everywhere else;
/// positive reproduces the mostly-plus bookkeeping of the classical list.
enum class TransverseSign { negative = -1, positive = 1 };

/// Wave profile H(u, x, y).
struct WaveProfile {
  enum class Kind { zero, x2, x2_minus_y2, uxy, quadratic };

  Kind kind = Kind::zero;
  Mat A = Mat::Zero(2, 2);  // H = (x, y) A (x, y)^T for Kind::quadratic

  static WaveProfile named(const std::string& name);
  static WaveProfile quadratic(const Mat& A);
  std::string name() const;

  template <class T>
  T operator()(const T& u, const T& x, const T& y) const {
    switch (kind) {
      case Kind::zero: return T(0.0);
      case Kind::x2: return x * x;
      case Kind::x2_minus_y2: return x * x - y * y;
      case Kind::uxy: return u * x * y;
      case Kind::quadratic: return A(0, 0) * x * x + (A(0, 1) + A(1, 0)) * x * y + A(1, 1) * y * y;
    }
    return T(0.0);
  }

  double value(double u, double x, double y) const { return (*this)(u, x, y); }
  /// (H_u, H_x, H_y)
  Eigen::Vector3d gradient(double u, double x, double y) const;
  /// Hessian in (u, x, y).
  Eigen::Matrix3d hessian(double u, double x, double y) const;
};

Lagrangian build_minkowski(int dim = 4);

Lagrangian build_brinkmann_quadratic(const WaveProfile& H, TransverseSign sign = TransverseSign::negative);

/// One transverse diagonal entry of a Rosen-type fixture as a function of x^0.
struct RosenAxis {
  enum class Kind { flat, cos2, exp2, lin2, affine };
  Kind kind = Kind::flat;
  double rate = 1.0;

  static RosenAxis parse(const std::string& kind, double rate = 1.0);
  std::string name() const;

  template <class T>
  T operator()(const T& u) const {
    using std::cos;
    using std::exp;
    switch (kind) {
      case Kind::flat: return T(1.0);
      case Kind::cos2: {
        const T c = cos(rate * u);
        return c * c;
      }
      case Kind::exp2: return exp(2.0 * rate * u);
      case Kind::lin2: {
        const T l = 1.0 + rate * u;
        return l * l;
      }
      case Kind::affine: return 1.0 + rate * u;
    }
    return T(1.0);
  }
};

/// L = 2 w0 w1 + g11 w1^2 + 2 g1i w1 wi - sum_i h_i(x^0) wi^2 with N = d/dx^0.
/// g11 and g1i are fixed smooth functions scaled by `cross_amplitude`.
struct RosenFixture {
  std::vector<RosenAxis> axes;
  double cross_amplitude = 0.0;

  int dim() const { return static_cast<int>(axes.size()) + 2; }

  template <class T>
  T g11(std::span<const T> x) const {
    using std::sin;
    if (cross_amplitude == 0.0) return T(0.0);
    T s = x[1] * x[1];
    for (std::size_t i = 2; i < x.size(); ++i) s = s + x[i] * x[i];
    return cross_amplitude * (sin(x[0] + x[2]) + s);
  }

  template <class T>
  T g1i(std::span<const T> x, std::size_t i) const {
    using std::cos;
    if (cross_amplitude == 0.0) return T(0.0);
    return cross_amplitude * (0.5 / static_cast<double>(i)) * cos(x[0] + x[1] + x[i]);
  }

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    T r = 2.0 * w[0] * w[1] + g11(x) * w[1] * w[1];
    for (std::size_t i = 2; i < w.size(); ++i) {
      r = r + 2.0 * g1i(x, i) * w[1] * w[i] - axes[i - 2](x[0]) * w[i] * w[i];
    }
    return r;
  }
};

Lagrangian build_rosen(const RosenFixture& fixture);

/// L = 2 w0 w1 + H w1^2 - psi(x, y) (wx^2 + wy^2), psi = 4 / (1 + K (x^2 + y^2))^2:
/// d/dv is lightlike and parallel but the screen is a round sphere of
/// Gaussian curvature K, so the pp-wave curvature condition fails.
Lagrangian build_curved_screen(double gaussian_curvature, const WaveProfile& H = {});

// ---------------------------------------------------------------------------
// Lagrangians built from a positive-definite Finsler norm F.
//
// F must provide  template <class T> T operator()(std::span<const T> x,
// std::span<const T> w) const  for nested hyper-dual T as well.

namespace detail {

template <class T>
std::vector<T> constant_vector(std::size_t n, double value) {
  return std::vector<T>(n, T(value));
}

/// g^F_w(e_a, e_b) at T-valued x, with w a double vector.
template <class F, class T>
T finsler_metric_entry(const F& f, std::span<const T> x, const std::vector<double>& w, int a, int b) {
  using H = HyperDual<2, T>;
  std::vector<H> xh;
  xh.reserve(x.size());
  for (const T& xi : x) xh.push_back(H(xi));
  std::vector<H> wh;
  wh.reserve(w.size());
  for (double wi : w) wh.push_back(H(wi));
  wh[static_cast<std::size_t>(a)][1] = T(1.0);
  wh[static_cast<std::size_t>(b)][2] = T(1.0);
  const H val = f(std::span<const H>(xh), std::span<const H>(wh));
  const H sq = val * val;
  return 0.5 * sq.top();
}

/// One-form with w(N) = F(N), w(d_1) = (1 + g^F_N(d_1, N)) / F(N),
/// w(d_a) = g^F_N(d_a, N) / F(N) for the remaining fiber slots, N = e_0.
template <class F, class T>
std::vector<T> lightlike_form(const F& f, std::span<const T> x, int fiber_dim) {
  std::vector<double> n(static_cast<std::size_t>(fiber_dim), 0.0);
  n[0] = 1.0;
  std::vector<T> nt = constant_vector<T>(n.size(), 0.0);
  nt[0] = T(1.0);
  const T fn = f(x, std::span<const T>(nt));
  std::vector<T> omega(static_cast<std::size_t>(fiber_dim));
  omega[0] = fn;
  for (int a = 1; a < fiber_dim; ++a) {
    const T g = finsler_metric_entry(f, x, n, a, 0);
    omega[static_cast<std::size_t>(a)] = (a == 1 ? 1.0 + g : g) / fn;
  }
  return omega;
}

}  // namespace detail

/// omega^2 - F^2 on the full chart, F independent of x^0.
template <class F>
struct ParallelExampleFn {
  F f;
  int n;

  template <class T>
  T omega(std::span<const T> x, std::span<const T> w) const {
    const std::vector<T> om = detail::lightlike_form(f, x, n);
    T s(0.0);
    for (int i = 0; i < n; ++i) s = s + om[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
    return s;
  }

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    const T om = omega(x, w);
    const T fv = f(x, w);
    return om * om - fv * fv;
  }
};

/// omega^2 - F^2 - |w_T|^2 with F a norm on the (v, u) plane that may depend
/// on the base point; omega acts on the (v, u) slots only.
template <class F>
struct PpWaveExampleFn {
  F f;
  int n;

  template <class T>
  T omega(std::span<const T> x, std::span<const T> w) const {
    const std::vector<T> om = detail::lightlike_form(f, x, 2);
    return om[0] * w[0] + om[1] * w[1];
  }

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    const T om = omega(x, w);
    const T fv = f(x, w.first(2));
    T r = om * om - fv * fv;
    for (int i = 2; i < n; ++i) r = r - w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
    return r;
  }
};

namespace detail {

/// N + s d_u with s halved until L > 0 and omega > 0.
template <class Fn>
Vec lightlike_cone_ref(const Fn& fn, const Vec& x) {
  const int n = static_cast<int>(x.size());
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
  double s = 1.0;
  for (int k = 0; k < 40; ++k, s *= 0.5) {
    Vec w = Vec::Zero(n);
    w(0) = 1.0;
    w(1) = s;
    const std::span<const double> ws(w.data(), static_cast<std::size_t>(n));
    if (fn(xs, ws) > 0.0 && fn.omega(xs, ws) > 0.0) return w;
  }
  throw ConstructionError("empty cone: no admissible vector found near N");
}

}  // namespace detail

template <class F>
Lagrangian build_parallel_example(const F& f, int dim, std::string name) {
  const ParallelExampleFn<F> fn{f, dim};
  return Lagrangian::from_generic(std::move(name), dim, fn,
                                  [fn](const Vec& x) { return detail::lightlike_cone_ref(fn, x); });
}

template <class F>
Lagrangian build_ppwave_example(const F& f, int dim, std::string name) {
  const PpWaveExampleFn<F> fn{f, dim};
  return Lagrangian::from_generic(std::move(name), dim, fn,
                                  [fn](const Vec& x) { return detail::lightlike_cone_ref(fn, x); });
}

/// Randers norm sqrt(w^T a(x) w) + b(x) . w on R^4 that ignores x^0,
/// a = I + amplitude * S(x^1, x^2, x^3).
struct SampleRandersNorm4 {
  double amplitude = 0.2;
  double drift = 0.3;

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const T& u = x[1];
    const T& p = x[2];
    const T& q = x[3];
    const T s00 = 0.5 * sin(u);
    const T s11 = 0.5 * cos(p * q);
    const T s22 = 0.5 * sin(u + p);
    const T s33 = 0.3 * cos(q);
    const T s01 = 0.25 * cos(p);
    const T s02 = 0.25 * sin(q);
    const T s12 = 0.2 * sin(u);
    const T s13 = 0.2 * cos(u - q);
    const T s23 = 0.1 * p / (1.0 + p * p);
    const T quad = w[0] * w[0] * (1.0 + amplitude * s00) + w[1] * w[1] * (1.0 + amplitude * s11) +
                   w[2] * w[2] * (1.0 + amplitude * s22) + w[3] * w[3] * (1.0 + amplitude * s33) +
                   2.0 * amplitude * (s01 * w[0] * w[1] + s02 * w[0] * w[2] + s12 * w[1] * w[2] +
                                      s13 * w[1] * w[3] + s23 * w[2] * w[3]);
    const T lin = drift * (0.5 * cos(u) * w[0] + 0.4 * sin(p) * w[1] + 0.3 * w[2] + 0.3 * cos(q) * w[3]);
    return sqrt(quad) + lin;
  }
};

/// Randers norm on the (v, u) plane depending on (x^1, x^2, x^3).
struct SampleRandersNorm2 {
  double amplitude = 0.3;
  double drift = 0.3;

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const T& u = x[1];
    const T& p = x[2];
    const T& q = x[3];
    const T a00 = 1.0 + amplitude * 0.5 * sin(u + p);
    const T a11 = 1.0 + amplitude * 0.5 * cos(p * q);
    const T a01 = amplitude * 0.3 * cos(q);
    const T quad = a00 * w[0] * w[0] + 2.0 * a01 * w[0] * w[1] + a11 * w[1] * w[1];
    const T lin = drift * (0.5 * cos(u) * w[0] + 0.4 * sin(p + q) * w[1]);
    return sqrt(quad) + lin;
  }
};

/// The built-in parallel example on R^4 (v, u, x, y).
Lagrangian build_sample_parallel_example(double amplitude = 0.2, double drift = 0.3);
/// The built-in Finsler pp-wave on R^4 (v, u, x, y).
Lagrangian build_sample_ppwave_example(double amplitude = 0.3, double drift = 0.3);

/// Sampled consistency of the lightlike one-form of a constructed example:
/// g^L_N(N, N) = 0, g^L_N(N, d_u) = 1, g^L_N(N, d_a) = 0 for a >= 2.
Report lightlike_form_consistency(const Lagrangian& L, int samples, std::uint64_t seed);

/// Every built-in entry with default parameters.
std::vector<Lagrangian> builtin_catalog();

}  // namespace finsler
