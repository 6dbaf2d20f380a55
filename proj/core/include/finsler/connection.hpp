#pragma once

// Levi-Civita-Chern connection, gradients, Hessians, pointwise-parallel
// extensions and geodesics.

#include "finsler/hyperdual.hpp"
#include "finsler/lagrangian.hpp"
#include "finsler/report.hpp"
#include "finsler/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace finsler {

struct VectorField {
  std::function<Vec(const Vec&)> eval;
  /// J(k, i) = d_i V^k. Optional; central differences are used when empty.
  std::function<Mat(const Vec&)> jacobian;

  Vec operator()(const Vec& x) const { return eval(x); }
  Mat jacobian_at(const Vec& x) const;

  static VectorField constant(const Vec& v);
  static VectorField coordinate(int n, int i) { return constant(unit_vector(n, i)); }
};

struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> differential;  // df
  std::function<Mat(const Vec&)> hessian;       // d_i d_j f

  /// fn must provide  template <class T> T operator()(std::span<const T>) const.
  template <class Fn>
  static ScalarField from_generic(Fn fn);
  static ScalarField coordinate(int i);
};

template <class Fn>
ScalarField ScalarField::from_generic(Fn fn) {
  ScalarField f;
  f.value = [fn](const Vec& x) { return fn(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))); };
  f.differential = [fn](const Vec& x) {
    const auto n = static_cast<std::size_t>(x.size());
    Vec d(x.size());
    std::vector<Dual1> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) xs[j] = Dual1(x(static_cast<Eigen::Index>(j)));
      xs[i][1] = 1.0;
      d(static_cast<Eigen::Index>(i)) = fn(std::span<const Dual1>(xs)).top();
    }
    return d;
  };
  f.hessian = [fn](const Vec& x) {
    const auto n = static_cast<std::size_t>(x.size());
    Mat h(x.size(), x.size());
    std::vector<Dual2> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) xs[k] = Dual2(x(static_cast<Eigen::Index>(k)));
        xs[i][1] = 1.0;
        xs[j][2] = 1.0;
        const double v = fn(std::span<const Dual2>(xs)).top();
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    }
    return h;
  };
  return f;
}

struct ChristoffelTable {
  Vec x;
  Vec v;          // V at the base point
  Tensor3 gamma;  // gamma(k, i, j) = Gamma^k_ij
  int iterations = 0;
  bool dense_solve = false;

  /// Gamma^k_ij a^i b^j
  Vec contract(const Vec& a, const Vec& b) const;
};

struct ChristoffelOptions {
  double tol = 1e-12;
  int max_iterations = 50;
  bool force_dense = false;
};

/// Chern symbols at (x, v). They depend on V only through V(x).
ChristoffelTable christoffel(const Lagrangian& L, const Vec& x, const Vec& v, const ChristoffelOptions& opt = {});
ChristoffelTable christoffel(const Lagrangian& L, const VectorField& V, const Vec& x,
                             const ChristoffelOptions& opt = {});

/// Levi-Civita symbols of a metric with first derivatives dg(k, i, j) = d_k g_ij.
Tensor3 levi_civita(const Mat& g, const Tensor3& dg);

/// d_k [g_ij(x, V(x))], V-Jacobian included.
Tensor3 metric_field_derivative(const Lagrangian& L, const VectorField& V, const Vec& x);

/// Gamma^k_ij(v) v^i v^j from base derivatives of L alone.
Vec spray(const Lagrangian& L, const Vec& x, const Vec& v);

/// (nabla^V_X Y)(x) for a field Y.
Vec covariant_derivative(const Lagrangian& L, const VectorField& V, const Vec& x, const Vec& X,
                         const VectorField& Y);

/// Koszul identity, torsion symmetry and almost g-compatibility over all
/// coordinate triples, each relative to the size of the metric derivatives.
Report connection_report(const Lagrangian& L, const VectorField& V, const Vec& x, double tol = 1e-8);

struct GradientOptions {
  int max_iterations = 50;
  int max_halvings = 30;
  double tol = 1e-13;
  std::optional<Vec> seed;
};

struct GradientResult {
  Vec w;
  int iterations = 0;
  double residual = 0.0;
  bool bordered = false;
};

/// Solves (1/2) d_v L(x, w) = df_x for w in the closure of the cone.
GradientResult solve_gradient(const Lagrangian& L, const ScalarField& f, const Vec& x, const GradientOptions& opt = {});
Vec gradient(const Lagrangian& L, const ScalarField& f, const Vec& x);

/// x -> grad f(x) with the Jacobian from implicit differentiation.
VectorField gradient_field(const Lagrangian& L, const ScalarField& f);

/// H^f_v(d_i, d_j) = d_i d_j f - Gamma^k_ij(v) d_k f.
Mat hessian(const Lagrangian& L, const ScalarField& f, const Vec& x, const Vec& v);

/// V(x) = v - Gamma(p, v)(x - p, v), so (nabla^V V)_p = 0.
VectorField parallel_extension(const Lagrangian& L, const Vec& v, const Vec& p);

/// max over coordinate X of |(nabla^V_X V)_p|.
double parallel_residual(const Lagrangian& L, const VectorField& V, const Vec& p);

struct GeodesicSample {
  double t;
  Vec x;
  Vec v;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  bool truncated = false;  // left the admissible cone
  std::string note;
  double lagrangian0 = 0.0;
  std::vector<double> drift;  // L(x(t), v(t)) - L(x0, v0)

  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
  /// Cubic Hermite interpolation in (x, v).
  GeodesicSample at(double t) const;
  Table to_table() const;
};

/// Adaptive Dormand-Prince integration of x'' + Gamma(x')(x', x') = 0.
GeodesicPath geodesic(const Lagrangian& L, const Vec& x0, const Vec& v0, double t0, double t1, double tol = 1e-9);

}  // namespace finsler
