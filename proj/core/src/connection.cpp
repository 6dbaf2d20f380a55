#include "finsler/connection.hpp"

#include "finsler/jets.hpp"
#include "finsler/tensors.hpp"
#include "ode.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace finsler {

namespace {

Mat central_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x) {
  const Vec f0 = f(x);
  Mat J(f0.size(), x.size());
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, x.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x;
    Vec xm = x;
    xp(i) += h;
    xm(i) -= h;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

Mat checked_inverse(const Mat& g, const std::string& where) {
  const Eigen::FullPivLU<Mat> lu(g);
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12 * std::pow(scale, static_cast<double>(g.rows()))) {
    throw SignatureError(where + ": degenerate fundamental tensor");
  }
  return lu.inverse();
}

/// T_lij = -C_jlm N^m_i - C_lim N^m_j + C_ijm N^m_l with N^m_i = Gamma^m_ik v^k;
/// the Cartan part of the lowered Chern symbols.
Tensor3 cartan_correction(const Tensor3& C, const Tensor3& gamma, const Vec& v) {
  const int n = C.dim();
  Mat N(n, n);  // N(m, i)
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += gamma(m, i, k) * v(k);
      N(m, i) = s;
    }
  }
  Tensor3 T(n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += -C(j, l, m) * N(m, i) - C(l, i, m) * N(m, j) + C(i, j, m) * N(m, l);
        T(l, i, j) = T(l, j, i) = s;
      }
    }
  }
  return T;
}

Tensor3 raise_first(const Mat& ginv, const Tensor3& lowered) {
  const int n = lowered.dim();
  Tensor3 out(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * lowered(l, i, j);
        out(k, i, j) = out(k, j, i) = s;
      }
    }
  }
  return out;
}

std::size_t flat_index(int n, int k, int i, int j) {
  return (static_cast<std::size_t>(k) * n + i) * n + j;
}

/// Solves Gamma - ginv T(Gamma) = gamma0 as one dense linear system.
Tensor3 dense_chern_solve(const Tensor3& gamma0, const Mat& ginv, const Tensor3& C, const Vec& v) {
  const int n = gamma0.dim();
  const int m = n * n * n;
  Mat A(m, m);
  Vec b(m);
  for (int col = 0; col < m; ++col) {
    Tensor3 unit(n);
    const int k = col / (n * n);
    const int i = (col / n) % n;
    const int j = col % n;
    unit(k, i, j) = 1.0;
    // the correction is linear in Gamma but uses only the contraction with v
    const Tensor3 image = raise_first(ginv, cartan_correction(C, unit, v));
    for (int row = 0; row < m; ++row) A(row, col) = (row == col ? 1.0 : 0.0) - image.data()[static_cast<std::size_t>(row)];
  }
  for (int row = 0; row < m; ++row) b(row) = gamma0.data()[static_cast<std::size_t>(row)];
  const Vec sol = A.colPivHouseholderQr().solve(b);
  if (!sol.allFinite()) throw SolverError("dense Chern solve produced non-finite symbols");
  Tensor3 gamma(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double s = 0.5 * (sol(static_cast<Eigen::Index>(flat_index(n, k, i, j))) +
                                sol(static_cast<Eigen::Index>(flat_index(n, k, j, i))));
        gamma(k, i, j) = gamma(k, j, i) = s;
      }
    }
  }
  return gamma;
}

}  // namespace

Mat VectorField::jacobian_at(const Vec& x) const {
  if (jacobian) return jacobian(x);
  return central_jacobian(eval, x);
}

VectorField VectorField::constant(const Vec& v) {
  VectorField V;
  V.eval = [v](const Vec&) { return v; };
  V.jacobian = [v](const Vec&) { return Mat::Zero(v.size(), v.size()); };
  return V;
}

ScalarField ScalarField::coordinate(int i) {
  ScalarField f;
  f.value = [i](const Vec& x) { return x(i); };
  f.differential = [i](const Vec& x) { return unit_vector(static_cast<int>(x.size()), i); };
  f.hessian = [](const Vec& x) { return Mat::Zero(x.size(), x.size()); };
  return f;
}

Vec ChristoffelTable::contract(const Vec& a, const Vec& b) const {
  const int n = gamma.dim();
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out(k) += gamma(k, i, j) * a(i) * b(j);
    }
  }
  return out;
}

Tensor3 levi_civita(const Mat& g, const Tensor3& dg) {
  const int n = dg.dim();
  const Mat ginv = checked_inverse(g, "levi_civita");
  Tensor3 lowered(n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double s = 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        lowered(l, i, j) = lowered(l, j, i) = s;
      }
    }
  }
  return raise_first(ginv, lowered);
}

ChristoffelTable christoffel(const Lagrangian& L, const Vec& x, const Vec& v, const ChristoffelOptions& opt) {
  require_admissible(L, x, v, "christoffel");
  const Mat g = fundamental_matrix(L, x, v);
  const Mat ginv = checked_inverse(g, "christoffel");
  const Tensor3 gamma0 = levi_civita(g, metric_base_derivative(L, x, v));
  const Tensor3 C = cartan_coeffs(L, x, v);

  ChristoffelTable out;
  out.x = x;
  out.v = v;
  if (C.max_abs() == 0.0) {
    out.gamma = gamma0;
    return out;
  }
  if (!opt.force_dense) {
    Tensor3 gamma = gamma0;
    const double scale = std::max(1.0, gamma0.max_abs());
    for (int it = 1; it <= opt.max_iterations; ++it) {
      const Tensor3 corr = raise_first(ginv, cartan_correction(C, gamma, v));
      Tensor3 next(gamma.dim());
      for (std::size_t q = 0; q < next.data().size(); ++q) {
        next.data()[q] = gamma0.data()[q] + corr.data()[q];
      }
      const double change = (next - gamma).max_abs();
      gamma = std::move(next);
      if (!std::isfinite(change)) break;
      if (change < opt.tol * scale) {
        out.gamma = std::move(gamma);
        out.iterations = it;
        return out;
      }
    }
  }
  out.gamma = dense_chern_solve(gamma0, ginv, C, v);
  out.dense_solve = true;
  out.iterations = opt.max_iterations;
  return out;
}

ChristoffelTable christoffel(const Lagrangian& L, const VectorField& V, const Vec& x, const ChristoffelOptions& opt) {
  return christoffel(L, x, V(x), opt);
}

Tensor3 metric_field_derivative(const Lagrangian& L, const VectorField& V, const Vec& x) {
  const Vec v = V(x);
  const int n = L.dim();
  Tensor3 d = metric_base_derivative(L, x, v);
  const Tensor3 C = cartan_coeffs(L, x, v);
  const Mat J = V.jacobian_at(x);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += C(i, j, m) * J(m, k);
        d(k, i, j) += 2.0 * s;
      }
    }
  }
  return d;
}

Vec spray(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  const Mat g = fundamental_matrix(L, x, v);
  Vec s(n);
  const Vec xd[1] = {v};
  for (int l = 0; l < n; ++l) {
    const Vec vd[1] = {unit_vector(n, l)};
    const Vec ld[1] = {unit_vector(n, l)};
    s(l) = 0.5 * mixed_derivative(L, x, v, xd, vd) - 0.5 * mixed_derivative(L, x, v, ld, {});
  }
  const Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw SignatureError("spray: degenerate fundamental tensor");
  return lu.solve(s);
}

Vec covariant_derivative(const Lagrangian& L, const VectorField& V, const Vec& x, const Vec& X,
                         const VectorField& Y) {
  const ChristoffelTable t = christoffel(L, V, x);
  return Y.jacobian_at(x) * X + t.contract(X, Y(x));
}

Report connection_report(const Lagrangian& L, const VectorField& V, const Vec& x, double tol) {
  Report r("connection");
  const int n = L.dim();
  const Vec v = V(x);
  const ChristoffelTable t = christoffel(L, x, v);
  const Tensor3& G = t.gamma;
  const Mat g = fundamental_matrix(L, x, v);
  const Tensor3 C = cartan_coeffs(L, x, v);
  const Tensor3 dg = metric_field_derivative(L, V, x);
  const Mat J = V.jacobian_at(x);

  // (nabla_i V)^m
  Mat DV(n, n);
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      double s = J(m, i);
      for (int k = 0; k < n; ++k) s += G(m, i, k) * v(k);
      DV(m, i) = s;
    }
  }
  const auto Cdv = [&](int a, int j, int l) {  // C(nabla_a V, d_j, d_l)
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += C(m, j, l) * DV(m, a);
    return s;
  };
  const auto lowered = [&](int l, int i, int j) {  // g(nabla_i d_j, d_l)
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += g(l, k) * G(k, i, j);
    return s;
  };

  const double scale = std::max({dg.max_abs(), g.cwiseAbs().maxCoeff() * std::max(1.0, G.max_abs()), 1e-300});
  double koszul = 0.0;
  double torsion = 0.0;
  double compat = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const double rhs = dg(i, j, l) - dg(l, i, j) + dg(j, l, i) +
                           2.0 * (-Cdv(i, j, l) - Cdv(j, l, i) + Cdv(l, i, j));
        koszul = std::max(koszul, std::abs(2.0 * lowered(l, i, j) - rhs));
        torsion = std::max(torsion, std::abs(G(l, i, j) - G(l, j, i)));
        const double c = dg(i, j, l) - lowered(l, i, j) - lowered(j, i, l) - 2.0 * Cdv(i, j, l);
        compat = std::max(compat, std::abs(c));
      }
    }
  }
  r.add("koszul identity", koszul / scale, tol);
  r.add("torsion-free", torsion / std::max(1.0, G.max_abs()), tol);
  r.add("almost g-compatible", compat / scale, tol);
  return r;
}

GradientResult solve_gradient(const Lagrangian& L, const ScalarField& f, const Vec& x, const GradientOptions& opt) {
  const Vec df = f.differential(x);
  const Vec c = L.cone_ref(x);
  const double dfc = df.dot(c);
  if (!(dfc > 0.0)) throw PreconditionError("no gradient: df does not stay positive on the cone");
  const double target = std::max(1.0, df.norm());

  Vec w;
  if (opt.seed) {
    w = *opt.seed;
  } else {
    const double Lc = L(x, c);
    w = (Lc > 0.0 ? dfc / Lc : 1.0) * c;
  }
  if (!in_closure(L, x, w)) throw ConeViolation("gradient seed outside the cone");

  const auto residual_of = [&](const Vec& ww) -> Vec { return 0.5 * fiber_gradient(L, x, ww) - df; };
  GradientResult out;
  Vec r = residual_of(w);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double rn = r.norm();
    if (rn <= opt.tol * target) {
      out.w = w;
      out.iterations = it;
      out.residual = rn;
      return out;
    }
    const Mat g = fundamental_matrix(L, x, w);
    Vec step;
    const Eigen::FullPivLU<Mat> lu(g);
    const double gscale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    if (lu.isInvertible() && std::abs(lu.determinant()) > 1e-12 * std::pow(gscale, static_cast<double>(g.rows()))) {
      step = -lu.solve(r);
    } else {
      // degenerate direction: border with the Euler constraint w . dw = 0
      const Eigen::Index n = g.rows();
      Mat B = Mat::Zero(n + 1, n + 1);
      B.topLeftCorner(n, n) = g;
      B.topRightCorner(n, 1) = w;
      B.bottomLeftCorner(1, n) = w.transpose();
      Vec rhs = Vec::Zero(n + 1);
      rhs.head(n) = -r;
      const Eigen::FullPivLU<Mat> blu(B);
      if (blu.isInvertible()) {
        step = blu.solve(rhs).head(n);
      } else {
        step = B.completeOrthogonalDecomposition().solve(rhs).head(n);
      }
      out.bordered = true;
    }
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
      const Vec trial = w + t * step;
      if (trial.norm() == 0.0 || !in_closure(L, x, trial)) continue;
      const Vec rt = residual_of(trial);
      if (rt.norm() < rn || h == opt.max_halvings) {
        w = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw SolverError("gradient Newton step left the cone after all halvings");
  }
  if (r.norm() <= opt.tol * target * 10.0) {
    out.w = w;
    out.iterations = opt.max_iterations;
    out.residual = r.norm();
    return out;
  }
  throw SolverError("gradient Newton did not converge, residual " + format_double(r.norm()));
}

Vec gradient(const Lagrangian& L, const ScalarField& f, const Vec& x) { return solve_gradient(L, f, x).w; }

VectorField gradient_field(const Lagrangian& L, const ScalarField& f) {
  VectorField W;
  W.eval = [L, f](const Vec& x) { return gradient(L, f, x); };
  W.jacobian = [L, f](const Vec& x) {
    const int n = L.dim();
    const Vec w = gradient(L, f, x);
    const Mat g = fundamental_matrix(L, x, w);
    // d_i of (1/2) d_v L at fixed fiber, K(l, i)
    Mat K(n, n);
    for (int l = 0; l < n; ++l) {
      const Vec vd[1] = {unit_vector(n, l)};
      for (int i = 0; i < n; ++i) {
        const Vec xd[1] = {unit_vector(n, i)};
        K(l, i) = 0.5 * mixed_derivative(L, x, w, xd, vd);
      }
    }
    return Mat(g.fullPivLu().solve(f.hessian(x) - K));
  };
  return W;
}

Mat hessian(const Lagrangian& L, const ScalarField& f, const Vec& x, const Vec& v) {
  const ChristoffelTable t = christoffel(L, x, v);
  const Vec df = f.differential(x);
  Mat H = f.hessian(x);
  const int n = L.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) H(i, j) -= t.gamma(k, i, j) * df(k);
    }
  }
  return H;
}

VectorField parallel_extension(const Lagrangian& L, const Vec& v, const Vec& p) {
  const ChristoffelTable t = christoffel(L, p, v);
  const int n = L.dim();
  Mat J(n, n);  // J(k, i) = -Gamma^k_ij v^j
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += t.gamma(k, i, j) * v(j);
      J(k, i) = -s;
    }
  }
  VectorField V;
  V.eval = [v, p, J](const Vec& x) { return Vec(v + J * (x - p)); };
  V.jacobian = [J](const Vec&) { return J; };
  return V;
}

double parallel_residual(const Lagrangian& L, const VectorField& V, const Vec& p) {
  const int n = L.dim();
  const ChristoffelTable t = christoffel(L, V, p);
  const Mat J = V.jacobian_at(p);
  const Vec v = V(p);
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec d = J.col(i) + t.contract(unit_vector(n, i), v);
    res = std::max(res, d.cwiseAbs().maxCoeff());
  }
  return res;
}

GeodesicSample GeodesicPath::at(double t) const {
  if (samples.empty()) throw DomainError("empty geodesic path");
  if (t <= samples.front().t) return samples.front();
  if (t >= samples.back().t) return samples.back();
  const auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const GeodesicSample& s, double tt) { return s.t < tt; });
  const GeodesicSample& b = *it;
  const GeodesicSample& a = *(it - 1);
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double h00 = 2 * s * s * s - 3 * s * s + 1;
  const double h10 = s * s * s - 2 * s * s + s;
  const double h01 = -2 * s * s * s + 3 * s * s;
  const double h11 = s * s * s - s * s;
  const double d00 = (6 * s * s - 6 * s) / h;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = (-6 * s * s + 6 * s) / h;
  const double d11 = 3 * s * s - 2 * s;
  GeodesicSample out;
  out.t = t;
  out.x = h00 * a.x + h10 * h * a.v + h01 * b.x + h11 * h * b.v;
  out.v = d00 * a.x + d10 * a.v + d01 * b.x + d11 * b.v;
  return out;
}

Table GeodesicPath::to_table() const {
  Table t;
  const int n = samples.empty() ? 0 : static_cast<int>(samples.front().x.size());
  t.columns.push_back("t");
  for (int i = 0; i < n; ++i) t.columns.push_back("x" + std::to_string(i));
  for (int i = 0; i < n; ++i) t.columns.push_back("v" + std::to_string(i));
  t.columns.push_back("L_drift");
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::vector<double> row;
    row.push_back(samples[s].t);
    for (int i = 0; i < n; ++i) row.push_back(samples[s].x(i));
    for (int i = 0; i < n; ++i) row.push_back(samples[s].v(i));
    row.push_back(drift[s]);
    t.add_row(std::move(row));
  }
  return t;
}

GeodesicPath geodesic(const Lagrangian& L, const Vec& x0, const Vec& v0, double t0, double t1, double tol) {
  require_admissible(L, x0, v0, "geodesic");
  const int n = L.dim();
  GeodesicPath path;
  path.lagrangian0 = L(x0, v0);
  path.samples.push_back({t0, x0, v0});
  path.drift.push_back(0.0);

  detail::OdeState state(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    state[i] = x0(i);
    state[n + i] = v0(i);
  }
  const auto split = [n](const detail::OdeState& s, Vec& x, Vec& v) {
    x = Eigen::Map<const Vec>(s.data(), n);
    v = Eigen::Map<const Vec>(s.data() + n, n);
  };
  const detail::OdeRhs rhs = [&](const detail::OdeState& s, detail::OdeState& ds, double) {
    Vec x;
    Vec v;
    split(s, x, v);
    const Vec a = -spray(L, x, v);
    for (int i = 0; i < n; ++i) {
      ds[i] = v(i);
      ds[n + i] = a(i);
    }
  };
  const detail::OdeObserver observer = [&](double t, const detail::OdeState& s) {
    Vec x;
    Vec v;
    split(s, x, v);
    if (!v.allFinite() || v.norm() == 0.0 || !in_closure(L, x, v, 1e-7)) {
      path.truncated = true;
      path.note = "left the admissible cone";
      return false;
    }
    path.samples.push_back({t, x, v});
    path.drift.push_back(L(x, v) - path.lagrangian0);
    return true;
  };
  double reached = t0;
  const detail::OdeStop stop = detail::integrate_checked(rhs, state, t0, t1, tol, observer, reached);
  if (stop == detail::OdeStop::underflow) throw SolverError("geodesic: step-size underflow");
  return path;
}

}  // namespace finsler
