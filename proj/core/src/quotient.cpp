#include "finsler/quotient.hpp"

#include "finsler/curvature.hpp"
#include "finsler/tensors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace finsler {

QuotientFrame quotient_metric(const Lagrangian& L, const VectorField& N, const Vec& x, const Mat& reps, double tol) {
  const int n = L.dim();
  if (reps.rows() != n || reps.cols() != n - 2) throw DomainError("quotient_metric needs n - 2 representatives");
  const Vec nv = N(x);
  if (std::abs(L(x, nv)) > 1e-10 * std::max(1.0, nv.squaredNorm())) throw DomainError("N is not lightlike");
  const Mat g = fundamental_matrix(L, x, nv);
  const Vec omega = g * nv;
  const double scale = std::max(1.0, omega.norm());
  for (Eigen::Index a = 0; a < reps.cols(); ++a) {
    if (std::abs(omega.dot(reps.col(a))) > tol * scale * std::max(1.0, reps.col(a).norm())) {
      throw DomainError("representative " + std::to_string(a) + " is not in N-perp");
    }
  }
  QuotientFrame q;
  q.x = x;
  q.reps = reps;
  q.gbar = -reps.transpose() * g * reps;
  q.gbar = 0.5 * (q.gbar + q.gbar.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Mat> es(q.gbar, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-12 * std::max(top, 1e-300))) {
    throw RankError("representatives are dependent modulo N");
  }
  return q;
}

Loop Loop::rectangle(const Vec& center, int a, int b, double side_a, double side_b) {
  const Eigen::Index n = center.size();
  const Vec ea = 0.5 * side_a * unit_vector(static_cast<int>(n), a);
  const Vec eb = 0.5 * side_b * unit_vector(static_cast<int>(n), b);
  return Loop{{center - ea - eb, center + ea - eb, center + ea + eb, center - ea + eb}};
}

double Loop::coordinate_area(int a, int b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec& p = vertices[i];
    const Vec& q = vertices[(i + 1) % vertices.size()];
    s += p(a) * q(b) - q(a) * p(b);
  }
  return 0.5 * std::abs(s);
}

namespace {

/// Coefficients of the columns of Y in the basis {N, reps, T}.
Mat screen_coefficients(const Lagrangian& L, const Vec& x, const Vec& nv, const Mat& reps, const Mat& Y) {
  const int n = L.dim();
  const Vec omega = fundamental_matrix(L, x, nv) * nv;
  Eigen::Index p = 0;
  omega.cwiseAbs().maxCoeff(&p);
  Mat B(n, n);
  B.col(0) = nv;
  B.middleCols(1, n - 2) = reps;
  B.col(n - 1) = unit_vector(n, static_cast<int>(p));
  const Eigen::FullPivLU<Mat> lu(B);
  if (!lu.isInvertible()) throw RankError("cannot complete the screen basis");
  return lu.solve(Y);
}

/// Product of implicit-midpoint steps of Y' = -Gamma(W, Y) around the loop.
Mat transport_matrix(const Lagrangian& L, const VectorField& N, const Loop& loop, int segments) {
  const int n = L.dim();
  const std::size_t edges = loop.vertices.size();
  if (edges < 2) throw DomainError("loop needs at least two vertices");
  const int per_edge = std::max(1, static_cast<int>((segments + static_cast<int>(edges) - 1) / static_cast<int>(edges)));
  const Mat I = Mat::Identity(n, n);
  Mat P = I;
  for (std::size_t e = 0; e < edges; ++e) {
    const Vec& a = loop.vertices[e];
    const Vec& b = loop.vertices[(e + 1) % edges];
    const Vec W = b - a;
    const double h = 1.0 / per_edge;
    for (int s = 0; s < per_edge; ++s) {
      const Vec xm = a + (s + 0.5) * h * W;
      const Tensor3 G = christoffel(L, N, xm).gamma;
      Mat A = Mat::Zero(n, n);
      for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
          for (int i = 0; i < n; ++i) A(k, j) += G(k, i, j) * W(i);
        }
      }
      P = (I + 0.5 * h * A).partialPivLu().solve((I - 0.5 * h * A) * P);
    }
  }
  return P;
}

}  // namespace

Vec transport_around(const Lagrangian& L, const VectorField& N, const Loop& loop, const Vec& y, int segments) {
  return transport_matrix(L, N, loop, segments) * y;
}

HolonomyResult holonomy(const Lagrangian& L, const VectorField& N, const Loop& loop, const Mat& reps,
                        const HolonomyOptions& opt) {
  const int n = L.dim();
  const int m = n - 2;
  const Vec& x0 = loop.vertices.front();
  const QuotientFrame q = quotient_metric(L, N, x0, reps);
  const Vec nv = N(x0);

  const int seg = std::max(opt.min_segments, 64);
  Mat P = transport_matrix(L, N, loop, 2 * seg);
  if (opt.richardson) P = (4.0 * P - transport_matrix(L, N, loop, seg)) / 3.0;

  const Mat coeffs = screen_coefficients(L, x0, nv, reps, P * reps);

  HolonomyResult out;
  out.segments = 2 * seg;
  out.transverse = coeffs.row(n - 1).cwiseAbs().maxCoeff();
  if (out.transverse > opt.screen_tol) {
    throw PreconditionError("transport leaves N-perp (" + format_double(out.transverse) + "): N is not parallel");
  }
  const Mat Hq = coeffs.middleRows(1, m);
  const Eigen::SelfAdjointEigenSolver<Mat> es(q.gbar);
  const Mat S = es.operatorSqrt();
  const Mat Sinv = es.operatorInverseSqrt();
  out.holonomy = S * Hq * Sinv;
  const Eigen::JacobiSVD<Mat> svd(out.holonomy - Mat::Identity(m, m));
  out.defect = svd.singularValues()(0);
  return out;
}

Mat quotient_curvature(const Lagrangian& L, const VectorField& N, const Vec& x, int a, int b, const Mat& reps) {
  const int n = L.dim();
  const QuotientFrame q = quotient_metric(L, N, x, reps);
  const CurvatureAt R = field_curvature(L, N, x);
  Mat Y(n, n - 2);
  for (int k = 0; k < n - 2; ++k) Y.col(k) = R.apply(unit_vector(n, a), unit_vector(n, b), reps.col(k));
  const Mat coeffs = screen_coefficients(L, x, N(x), reps, Y);
  const Eigen::SelfAdjointEigenSolver<Mat> es(q.gbar);
  return es.operatorSqrt() * coeffs.middleRows(1, n - 2) * es.operatorInverseSqrt();
}

double holonomy_defect(const Lagrangian& L, const VectorField& N, const Loop& loop, const Mat& reps,
                       const HolonomyOptions& opt) {
  return holonomy(L, N, loop, reps, opt).defect;
}

}  // namespace finsler
