#include "finsler/tensors.hpp"

#include "finsler/jets.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace finsler {

Signature signature(const Mat& g, double rel_threshold) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  Signature s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= rel_threshold * scale || scale == 0.0) {
      ++s.zero;
    } else if (ev(i) > 0.0) {
      ++s.positive;
    } else {
      ++s.negative;
    }
  }
  return s;
}

Mat fundamental_matrix(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Vec d[2] = {unit_vector(n, i), unit_vector(n, j)};
      g(i, j) = g(j, i) = 0.5 * mixed_derivative(L, x, v, {}, d);
    }
  }
  return g;
}

Tensor3 cartan_coeffs(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  Tensor3 c(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        const Vec d[3] = {unit_vector(n, i), unit_vector(n, j), unit_vector(n, k)};
        const double val = 0.25 * mixed_derivative(L, x, v, {}, d);
        c(i, j, k) = c(i, k, j) = c(j, i, k) = c(j, k, i) = c(k, i, j) = c(k, j, i) = val;
      }
    }
  }
  return c;
}

Tensor3 metric_base_derivative(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  Tensor3 d(n);
  for (int k = 0; k < n; ++k) {
    const Vec xd[1] = {unit_vector(n, k)};
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const Vec vd[2] = {unit_vector(n, i), unit_vector(n, j)};
        d(k, i, j) = d(k, j, i) = 0.5 * mixed_derivative(L, x, v, xd, vd);
      }
    }
  }
  return d;
}

FundamentalTensor fundamental_tensor(const Lagrangian& L, const Vec& x, const Vec& v) {
  require_admissible(L, x, v, "fundamental_tensor");
  return {x, v, fundamental_matrix(L, x, v)};
}

CartanTensor cartan_tensor(const Lagrangian& L, const Vec& x, const Vec& v) {
  require_admissible(L, x, v, "cartan_tensor");
  return {x, v, cartan_coeffs(L, x, v)};
}

Report homogeneity_report(const Lagrangian& L, const Vec& x, const Vec& v, double tol) {
  Report r("homogeneity");
  const int n = L.dim();
  const Mat g = fundamental_matrix(L, x, v);
  const double gscale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  const double Lv = L(x, v);
  const double lscale = std::max(std::abs(Lv), gscale * v.squaredNorm());

  double res_l = 0.0;
  double res_g = 0.0;
  for (double lambda : {0.5, 2.0, 3.0}) {
    const double Ll = L(x, lambda * v);
    res_l = std::max(res_l, std::abs(Ll - lambda * lambda * Lv) / (lambda * lambda * lscale));
    const Mat gl = fundamental_matrix(L, x, lambda * v);
    res_g = std::max(res_g, (gl - g).cwiseAbs().maxCoeff() / gscale);
  }
  r.add("L(lambda v) = lambda^2 L(v)", res_l, tol);
  r.add("g_{lambda v} = g_v", res_g, tol);
  r.add("g_v(v, v) = L(v)", std::abs(v.dot(g * v) - Lv) / lscale, tol);

  const Tensor3 c = cartan_coeffs(L, x, v);
  double res_c = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += c(i, j, k) * v(i);
      res_c = std::max(res_c, std::abs(s));
    }
  }
  r.add("C_v(v, ., .) = 0", res_c / gscale, tol);
  return r;
}

}  // namespace finsler
