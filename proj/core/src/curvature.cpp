#include "finsler/curvature.hpp"

#include "finsler/tensors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace finsler {

Vec CurvatureAt::apply(const Vec& X, const Vec& Y, const Vec& Z) const {
  const int n = R.dim();
  Vec out = Vec::Zero(n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      if (X(i) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        if (Y(j) == 0.0) continue;
        for (int k = 0; k < n; ++k) out(l) += R(l, i, j, k) * X(i) * Y(j) * Z(k);
      }
    }
  }
  return out;
}

namespace {

/// dgamma(i, l, j, k) = d_i Gamma^l_jk, stored flat as Tensor4.
Tensor4 christoffel_gradient(const Lagrangian& L, const VectorField& V, const Vec& x, const CurvatureOptions& opt) {
  const int n = L.dim();
  const double h = opt.step_scale * std::cbrt(std::numeric_limits<double>::epsilon()) *
                   std::max(1.0, x.cwiseAbs().maxCoeff());
  const auto gamma_at = [&](const Vec& y) { return christoffel(L, y, V(y)).gamma; };
  const auto central = [&](int i, double step) {
    Vec xp = x;
    Vec xm = x;
    xp(i) += step;
    xm(i) -= step;
    const Tensor3 gp = gamma_at(xp);
    const Tensor3 gm = gamma_at(xm);
    std::vector<double> d(gp.data().size());
    for (std::size_t q = 0; q < d.size(); ++q) d[q] = (gp.data()[q] - gm.data()[q]) / (2.0 * step);
    return d;
  };
  Tensor4 out(n);
  const std::size_t block = static_cast<std::size_t>(n) * n * n;
  for (int i = 0; i < n; ++i) {
    std::vector<double> d = central(i, h);
    if (opt.richardson) {
      const std::vector<double> d2 = central(i, 0.5 * h);
      for (std::size_t q = 0; q < d.size(); ++q) d[q] = (4.0 * d2[q] - d[q]) / 3.0;
    }
    std::copy(d.begin(), d.end(), out.data().begin() + static_cast<std::ptrdiff_t>(i * block));
  }
  return out;
}

}  // namespace

CurvatureAt field_curvature(const Lagrangian& L, const VectorField& V, const Vec& x, const CurvatureOptions& opt) {
  const int n = L.dim();
  const Vec v = V(x);
  const Tensor3 G = christoffel(L, x, v).gamma;
  const Tensor4 dG = christoffel_gradient(L, V, x, opt);
  CurvatureAt out;
  out.x = x;
  out.v = v;
  out.R = Tensor4(n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double s = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < n; ++m) s += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          out.R(l, i, j, k) = s;
          out.R(l, j, i, k) = -s;
        }
      }
    }
  }
  return out;
}

CurvatureAt chern_curvature(const Lagrangian& L, const Vec& x, const Vec& v, const CurvatureOptions& opt) {
  return field_curvature(L, parallel_extension(L, v, x), x, opt);
}

Tensor4 lowered_curvature(const CurvatureAt& R, const Mat& g) {
  const int n = R.R.dim();
  Tensor4 out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += g(l, m) * R.R(m, i, j, k);
          out(i, j, k, l) = s;
        }
      }
    }
  }
  return out;
}

Mat screen_basis(const Mat& gN, const Vec& N) {
  const Eigen::Index n = N.size();
  const Vec omega = gN * N;
  // Euclidean basis of ker omega, then drop the N direction
  const Eigen::JacobiSVD<Mat> svd(omega.transpose(), Eigen::ComputeFullV);
  const Mat K = svd.matrixV().rightCols(n - 1);
  const Vec nhat = N / N.norm();
  Mat T = K - nhat * (nhat.transpose() * K);
  const Eigen::JacobiSVD<Mat> tsvd(T, Eigen::ComputeThinU);
  Mat trans = tsvd.matrixU().leftCols(n - 2);
  // orthonormalize for h = -g_N, which is positive on N-perp mod N
  for (Eigen::Index a = 0; a < trans.cols(); ++a) {
    Vec t = trans.col(a);
    for (Eigen::Index b = 0; b < a; ++b) {
      const Vec s = trans.col(b);
      t += (t.dot(gN * s)) * s;  // t - h(t, s) s with h = -g
    }
    const double hn = -t.dot(gN * t);
    if (!(hn > 0.0)) throw SignatureError("screen metric is not positive definite");
    trans.col(a) = t / std::sqrt(hn);
  }
  Mat B(n, n - 1);
  B.col(0) = nhat;
  B.rightCols(n - 2) = trans;
  return B;
}

Report ppwave_condition(const Lagrangian& L, const VectorField& N, const std::vector<Vec>& samples,
                        const PpWaveOptions& opt) {
  Report r("ppwave condition");
  const int n = L.dim();
  Table& tab = r.samples();
  tab.columns = {"sample", "lightlike", "parallel", "screen_curvature", "max_curvature"};

  double lightlike = 0.0;
  double parallel = 0.0;
  double screen = 0.0;
  double scale_seen = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec& x = samples[s];
    const Vec nv = N(x);
    const double ll = std::abs(L(x, nv)) / std::max(1.0, nv.squaredNorm());
    double pr = std::numeric_limits<double>::quiet_NaN();
    double sc = std::numeric_limits<double>::quiet_NaN();
    double rmax = std::numeric_limits<double>::quiet_NaN();
    lightlike = std::max(lightlike, ll);
    if (ll <= opt.lightlike_tol) {
      pr = parallel_residual(L, N, x) / std::max(1.0, nv.norm());
      parallel = std::max(parallel, pr);
      const CurvatureAt R = field_curvature(L, N, x);
      rmax = R.R.max_abs();
      scale_seen = std::max(scale_seen, rmax);
      const Mat B = screen_basis(fundamental_matrix(L, x, nv), nv);
      sc = 0.0;
      for (Eigen::Index a = 0; a < B.cols(); ++a) {
        for (Eigen::Index b = 0; b < B.cols(); ++b) {
          if (a == b) continue;
          for (Eigen::Index c = 0; c < B.cols(); ++c) {
            sc = std::max(sc, R.apply(B.col(a), B.col(b), B.col(c)).cwiseAbs().maxCoeff());
          }
        }
      }
      screen = std::max(screen, sc);
    }
    tab.add_row({static_cast<double>(s), ll, pr, sc, rmax});
  }
  (void)n;
  const double scale = opt.scale ? *opt.scale : std::max(1.0, scale_seen);
  r.note("curvature_scale", scale);
  r.add("N lightlike", lightlike, opt.lightlike_tol);
  if (lightlike > opt.lightlike_tol) {
    r.set_precondition_failure("N is not lightlike on the samples");
    return r;
  }
  r.add("N parallel", parallel, opt.parallel_tol);
  if (!(parallel <= opt.parallel_tol)) {
    r.set_precondition_failure("N is not parallel on the samples");
    return r;
  }
  r.add("R_N vanishes on N-perp", screen / scale, opt.rel_tol);
  return r;
}

}  // namespace finsler
