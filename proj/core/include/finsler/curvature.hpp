#pragma once

// Chern curvature through pointwise-parallel extensions, and the pp-wave
// curvature condition on the screen N-perp.

#include "finsler/connection.hpp"
#include "finsler/lagrangian.hpp"
#include "finsler/report.hpp"
#include "finsler/types.hpp"

#include <vector>

namespace finsler {

struct CurvatureAt {
  Vec x;
  Vec v;
  Tensor4 R;  // R(l, i, j, k): d_l component of R(d_i, d_j) d_k

  /// R(X, Y) Z
  Vec apply(const Vec& X, const Vec& Y, const Vec& Z) const;
};

struct CurvatureOptions {
  double step_scale = 1.0;  // multiplies eps^(1/3) max(1, |x|)
  bool richardson = true;
};

/// Curvature of the affine connection nabla^V at x, from central differences
/// of the Christoffel field y -> Gamma(y, V(y)).
CurvatureAt field_curvature(const Lagrangian& L, const VectorField& V, const Vec& x, const CurvatureOptions& opt = {});

/// R_v = R^V_p with V the pointwise-parallel extension of v at p = x.
CurvatureAt chern_curvature(const Lagrangian& L, const Vec& x, const Vec& v, const CurvatureOptions& opt = {});

/// Rm(X, Y, U, W) = g_N(R(X, Y) U, W) in the coordinate basis, (i, j, k, l).
Tensor4 lowered_curvature(const CurvatureAt& R, const Mat& g);

/// Basis of N-perp = ker g_N(N, .): N first, then n - 2 vectors orthonormal
/// for -g_N. Columns of the returned matrix.
Mat screen_basis(const Mat& gN, const Vec& N);

struct PpWaveOptions {
  double rel_tol = 1e-6;        // times the curvature scale
  double lightlike_tol = 1e-10;
  double parallel_tol = 1e-8;
  std::optional<double> scale;  // override of max(1, max |R|)
};

/// max |R_N(X, Y) Z| over N-perp basis triples at every sample, relative to
/// the curvature scale. Precondition failures are reported, not thrown.
Report ppwave_condition(const Lagrangian& L, const VectorField& N, const std::vector<Vec>& samples,
                        const PpWaveOptions& opt = {});

}  // namespace finsler
