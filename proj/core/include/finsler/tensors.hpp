#pragma once

// Fundamental tensor g_v = (1/2) Hess_v L and Cartan tensor C_v = (1/4) D^3_v L.

#include "finsler/lagrangian.hpp"
#include "finsler/report.hpp"
#include "finsler/types.hpp"

namespace finsler {

struct FundamentalTensor {
  Vec x;
  Vec v;
  Mat matrix;
};

struct CartanTensor {
  Vec x;
  Vec v;
  Tensor3 coeffs;
};

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  bool degenerate() const { return zero > 0; }
  /// (+, -, ..., -)
  bool lorentzian() const { return positive == 1 && zero == 0 && negative >= 1; }
};

/// Eigenvalues with |lambda| <= rel_threshold * max|lambda| count as zero.
Signature signature(const Mat& g, double rel_threshold = 1e-10);

/// Unchecked kernels: no cone test, for use inside iterative code.
Mat fundamental_matrix(const Lagrangian& L, const Vec& x, const Vec& v);
Tensor3 cartan_coeffs(const Lagrangian& L, const Vec& x, const Vec& v);
/// d/dx^k g_ij(x, v) at fixed v, stored as (k, i, j).
Tensor3 metric_base_derivative(const Lagrangian& L, const Vec& x, const Vec& v);

/// v may lie on the closure of the cone.
FundamentalTensor fundamental_tensor(const Lagrangian& L, const Vec& x, const Vec& v);
CartanTensor cartan_tensor(const Lagrangian& L, const Vec& x, const Vec& v);

/// Relative residuals of L(lv) = l^2 L(v), g_{lv} = g_v, g_v(v,v) = L(v) and
/// C_v(v,.,.) = 0 for l in {0.5, 2, 3}. Never throws on failure.
Report homogeneity_report(const Lagrangian& L, const Vec& x, const Vec& v, double tol = 1e-9);

}  // namespace finsler
