#pragma once

// Test-only reference computations. Nothing here calls into the jet,
// connection or curvature code of the library; it works from plain double
// evaluations of L and from hand-written closed forms.

#include "finsler/catalog.hpp"
#include "finsler/lagrangian.hpp"
#include "finsler/types.hpp"

#include <functional>
#include <vector>

namespace oracle {

using finsler::Lagrangian;
using finsler::Mat;
using finsler::Tensor3;
using finsler::Tensor4;
using finsler::Vec;

/// g_ij(x, v) = (1/2) d^2 L / dv^i dv^j by Richardson-extrapolated central differences.
Mat fd_metric(const Lagrangian& L, const Vec& x, const Vec& v);

/// Metric of a quadratic L (g independent of v) and its x-derivatives
/// dg(k, i, j) from Richardson-extrapolated central differences of fd_metric.
Tensor3 fd_metric_derivative(const Lagrangian& L, const Vec& x, const Vec& v);

/// Metric of a quadratic L by polarization, g_ij = (L(e_i + e_j) - L(e_i - e_j)) / 4.
Mat polarized_metric(const Lagrangian& L, const Vec& x);

/// d_k g_ij of a quadratic L from an eighth-order central stencil of polarized_metric.
Tensor3 polarized_metric_derivative(const Lagrangian& L, const Vec& x, double step = 1e-2);

/// Levi-Civita symbols Gamma^k_ij written out from the Koszul formula.
Tensor3 christoffel_from_metric(const Mat& g, const Tensor3& dg);

/// Hand list of the nonzero Brinkmann symbols for 2 dv du + H du^2 + s |dx|^2.
Tensor3 brinkmann_symbols(const std::function<double(double, double, double)>& H, const Vec& x, double s);

/// R(l, i, j, k) of a symbol field by central differences of the symbols.
Tensor4 curvature_from_symbols(const std::function<Tensor3(const Vec&)>& gamma, const Vec& x, double step = 1e-4);

/// Fixed-step classical RK4 for y' = f(t, y).
std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
                        std::vector<double> y, double t0, double t1, int steps);

/// First zero after t0 of the scalar Jacobi equation e'' = a(t) e, e(t0) = 1,
/// e'(t0) = 0, located by RK4 scanning and secant refinement; NaN if none.
double first_jacobi_zero(const std::function<double(double)>& a, double t0, double t1, int steps = 4000);

/// Zeros of e'' = a(t) e, e(t0) = 1, e'(t0) = 0 inside (t0, t1).
std::vector<double> jacobi_zeros(const std::function<double(double)>& a, double t0, double t1, int steps = 4000);

/// a(t) = e''/e for e = sqrt(-L((t, 0, ..., 0), d_axis)) of a diagonal Rosen
/// chart. Where e drops below `floor` the value is extrapolated linearly from
/// the last reliable stretch, since a stays smooth through focal points.
std::function<double(double)> rosen_jacobi_coefficient(const Lagrangian& L, int axis, double floor = 0.05);

/// All catalog entries.
std::vector<Lagrangian> catalog();

}  // namespace oracle
