#include "finsler/penrose.hpp"

#include "finsler/curvature.hpp"
#include "finsler/jets.hpp"
#include "finsler/ppwave.hpp"
#include "finsler/random.hpp"
#include "finsler/tensors.hpp"
#include "ode.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>

namespace finsler {

namespace {

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Mat skew(const Mat& m) { return 0.5 * (m - m.transpose()); }

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

RosenProfile RosenProfile::from_lagrangian(const Lagrangian& L) {
  const int n = L.dim();
  RosenProfile p;
  p.transverse_dim = n - 2;
  p.jet = [L, n](double u) {
    const int m = n - 2;
    Vec x = Vec::Zero(n);
    x(0) = u;
    const Vec e0 = unit_vector(n, 0);
    const std::array<Vec, 1> one{e0};
    const std::array<Vec, 2> two{e0, e0};
    RosenJet j{Mat(m, m), Mat(m, m), Mat(m, m)};
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        const std::array<Vec, 2> vd{unit_vector(n, a + 2), unit_vector(n, b + 2)};
        const double h = -0.5 * mixed_derivative(L, x, e0, {}, vd);
        const double dh = -0.5 * mixed_derivative(L, x, e0, one, vd);
        const double ddh = -0.5 * mixed_derivative(L, x, e0, two, vd);
        j.h(a, b) = j.h(b, a) = h;
        j.dh(a, b) = j.dh(b, a) = dh;
        j.ddh(a, b) = j.ddh(b, a) = ddh;
      }
    }
    return j;
  };
  return p;
}

RosenProfile RosenProfile::diagonal(const std::vector<std::function<double(double)>>& axes,
                                    const std::vector<std::function<double(double)>>& d_axes,
                                    const std::vector<std::function<double(double)>>& dd_axes) {
  if (axes.empty() || axes.size() != d_axes.size() || axes.size() != dd_axes.size()) {
    throw DomainError("diagonal Rosen profile needs matching axis derivatives");
  }
  RosenProfile p;
  p.transverse_dim = static_cast<int>(axes.size());
  p.jet = [axes, d_axes, dd_axes](double u) {
    const auto m = static_cast<Eigen::Index>(axes.size());
    RosenJet j{Mat::Zero(m, m), Mat::Zero(m, m), Mat::Zero(m, m)};
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      j.h(i, i) = axes[k](u);
      j.dh(i, i) = d_axes[k](u);
      j.ddh(i, i) = dd_axes[k](u);
    }
    return j;
  };
  return p;
}

RosenProfile RosenProfile::constant(const Mat& h) {
  RosenProfile p;
  p.transverse_dim = static_cast<int>(h.rows());
  p.jet = [h](double) {
    return RosenJet{h, Mat::Zero(h.rows(), h.cols()), Mat::Zero(h.rows(), h.cols())};
  };
  return p;
}

bool positive_definite(const Mat& h, double rel_tol) {
  if (!h.allFinite()) return false;
  const Eigen::SelfAdjointEigenSolver<Mat> es(sym(h), Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  return es.eigenvalues().minCoeff() > rel_tol * std::max(top, 1e-300);
}

// ---------------------------------------------------------------------------

std::optional<double> focal_point_between(const RosenProfile& rosen, double a, double b, double positivity_tol) {
  if (a > b) std::swap(a, b);
  // d log det h; undefined where h is singular, so only evaluated inside
  const auto rate = [&rosen](double u) {
    const RosenJet j = rosen.jet(u);
    const Eigen::FullPivLU<Mat> lu(j.h);
    return lu.isInvertible() ? lu.solve(j.dh).trace() : 0.0;
  };
  constexpr int kPieces = 8;
  const double width = (b - a) / kPieces;
  double lo = a;
  double rlo = rate(lo);
  for (int k = 1; k <= kPieces; ++k) {
    const double hi = a + width * k;
    const double rhi = rate(hi);
    if (rlo < 0.0 && rhi > 0.0) {
      double l = lo;
      double r = hi;
      for (int it = 0; it < 200 && r - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
        const double mid = 0.5 * (l + r);
        const double rm = rate(mid);
        if (rm == 0.0) {
          l = r = mid;
          break;
        }
        (rm < 0.0 ? l : r) = mid;
      }
      const double u = 0.5 * (l + r);
      if (!positive_definite(rosen.h(u), positivity_tol)) return u;
    }
    lo = hi;
    rlo = rhi;
  }
  return std::nullopt;
}

Vec rescale_weights(int n, double omega) {
  Vec w = Vec::Constant(n, omega);
  w(0) = 1.0;
  w(1) = omega * omega;
  return w;
}

Vec rescale_to_chart(const Vec& xt, double omega) {
  return rescale_weights(static_cast<int>(xt.size()), omega).cwiseProduct(xt);
}

namespace {

void require_omega(double omega) {
  if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("omega must lie in (0, 1]");
}

Vec chart_point(const Lagrangian& L, const Vec& xt, double omega) {
  if (xt.size() != L.dim()) throw DomainError("sample has the wrong dimension");
  const Vec x = rescale_to_chart(xt, omega);
  if (!L.region().contains(x)) throw DomainError("sample outside the rescaled chart");
  return x;
}

/// Weight of g_ab inside the rescaled table; 0 marks a constant entry.
double table_weight(int a, int b, double omega) {
  if (a == 0 || b == 0) return 0.0;
  if (a == 1 && b == 1) return omega * omega;
  if (a == 1 || b == 1) return omega;
  return 1.0;
}

Mat table_from(const Mat& g, double omega) {
  const auto n = static_cast<int>(g.rows());
  Mat t = Mat::Zero(n, n);
  t(0, 1) = t(1, 0) = 1.0;
  for (int a = 1; a < n; ++a) {
    for (int b = 1; b < n; ++b) t(a, b) = table_weight(a, b, omega) * g(a, b);
  }
  return t;
}

}  // namespace

Mat rescaled_metric(const Lagrangian& L, const VectorField& N, const Vec& xt, double omega) {
  require_omega(omega);
  const Vec x = chart_point(L, xt, omega);
  return table_from(fundamental_matrix(L, x, N(x)), omega);
}

Report homothety_residual(const Lagrangian& L, const VectorField& N, double omega, const std::vector<Vec>& samples,
                          double tol) {
  require_omega(omega);
  Report r("homothety");
  r.note("omega", omega);
  Table& tab = r.samples();
  tab.columns = {"sample", "residual", "dx0_dx1"};
  const int n = L.dim();
  const Vec J = rescale_weights(n, omega);
  double worst = 0.0;
  double coeff = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec x = chart_point(L, samples[s], omega);
    const Mat g = fundamental_matrix(L, x, N(x));
    const Mat pulled = J.asDiagonal() * g * J.asDiagonal();
    const Mat scaled = omega * omega * table_from(g, omega);
    const double res = max_abs(pulled - scaled) / std::max(max_abs(pulled), 1e-300);
    const double c = std::abs(pulled(0, 1) - scaled(0, 1)) / (omega * omega);
    worst = std::max(worst, res);
    coeff = std::max(coeff, c);
    tab.add_row({static_cast<double>(s), res, c});
  }
  r.add("pullback equals omega^2 g_omega", worst, tol);
  r.add("dx0 dx1 coefficient", coeff, tol);
  return r;
}

Report homothety_connection_residual(const Lagrangian& L, const VectorField& N, double omega,
                                     const std::vector<Vec>& samples, double tol) {
  require_omega(omega);
  Report r("homothety connection");
  r.note("omega", omega);
  Table& tab = r.samples();
  tab.columns = {"sample", "residual"};
  const int n = L.dim();
  const Vec J = rescale_weights(n, omega);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec x = chart_point(L, samples[s], omega);
    const Mat g = fundamental_matrix(L, x, N(x));
    const Tensor3 dg = metric_field_derivative(L, N, x);
    const Mat pulled = J.asDiagonal() * g * J.asDiagonal();
    const Mat table = table_from(g, omega);
    Tensor3 d_pulled(n);
    Tensor3 d_table(n);
    for (int c = 0; c < n; ++c) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          d_pulled(c, a, b) = J(a) * J(b) * J(c) * dg(c, a, b);
          d_table(c, a, b) = J(c) * table_weight(a, b, omega) * dg(c, a, b);
        }
      }
    }
    const Tensor3 g1 = levi_civita(pulled, d_pulled);
    const Tensor3 g2 = levi_civita(table, d_table);
    const double res = (g1 - g2).max_abs() / std::max(1.0, g1.max_abs());
    worst = std::max(worst, res);
    tab.add_row({static_cast<double>(s), res});
  }
  r.add("Levi-Civita of g_omega equals that of the pullback", worst, tol);
  return r;
}

Report limit_decay_check(const Lagrangian& L, const VectorField& N, const std::vector<Vec>& samples,
                         const std::vector<double>& omegas, double tol) {
  if (omegas.size() < 2) throw DomainError("decay check needs at least two omegas");
  Report r("limit decay");
  Table& tab = r.samples();
  tab.columns = {"sample", "err11_first", "err11_last", "err1i_first", "err1i_last"};
  const int n = L.dim();
  const double w_first = omegas.front();
  const double w_last = omegas.back();
  double worst11 = 0.0;
  double worst1i = 0.0;
  // err(W) = |(g_W)_1a / W^p - g_1a(ray)| must shrink at least linearly in W.
  const auto excess = [&](double e_first, double e_last, double scale) {
    const double allowed = 2.0 * e_first * (w_last / w_first) + 1e-12 * scale;
    return std::max(0.0, e_last - allowed) / std::max(1.0, scale);
  };
  for (std::size_t s = 0; s < samples.size(); ++s) {
    Vec ray = Vec::Zero(n);
    ray(0) = samples[s](0);
    const Mat g_ray = fundamental_matrix(L, ray, N(ray));
    std::vector<double> e11;
    std::vector<double> e1i;
    for (double w : {w_first, w_last}) {
      const Mat t = rescaled_metric(L, N, samples[s], w);
      e11.push_back(std::abs(t(1, 1) / (w * w) - g_ray(1, 1)));
      double m = 0.0;
      for (int i = 2; i < n; ++i) m = std::max(m, std::abs(t(1, i) / w - g_ray(1, i)));
      e1i.push_back(m);
    }
    const double scale = max_abs(g_ray);
    worst11 = std::max(worst11, excess(e11[0], e11[1], scale));
    worst1i = std::max(worst1i, excess(e1i[0], e1i[1], scale));
    tab.add_row({static_cast<double>(s), e11[0], e11[1], e1i[0], e1i[1]});
  }
  r.add("(g_omega)_11 / omega^2 converges to the ray value", worst11, tol);
  r.add("(g_omega)_1i / omega converges to the ray value", worst1i, tol);
  return r;
}

// ---------------------------------------------------------------------------

Table BrinkmannProfile::to_table() const {
  Table t;
  t.columns = {"u"};
  const Eigen::Index m = h.empty() ? 0 : h.front().rows();
  for (const char* name : {"h", "M", "A"}) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) t.columns.push_back(std::string(name) + std::to_string(i) + std::to_string(j));
    }
  }
  for (std::size_t k = 0; k < u.size(); ++k) {
    std::vector<double> row{u[k]};
    for (const Mat* mat : {&h[k], &M[k], &A[k]}) {
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) row.push_back((*mat)(i, j));
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

double BrinkmannProfile::max_deviation(const std::function<Mat(double)>& expected) const {
  double d = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) d = std::max(d, max_abs(A[k] - expected(u[k])));
  return d;
}

namespace {

struct FrameJet {
  Mat E0;
  Mat dE0;
  Mat ddE0;
};

/// E0 = h^{-1/2} and its first two derivatives from Sylvester equations
/// in the eigenbasis of h.
FrameJet inverse_sqrt_jet(const RosenJet& j, double positivity_tol) {
  if (!positive_definite(j.h, positivity_tol)) throw DegeneracyError("transverse block is not positive definite");
  const Eigen::SelfAdjointEigenSolver<Mat> es(sym(j.h));
  const Mat& Q = es.eigenvectors();
  const Vec lam = es.eigenvalues();
  const Vec e = lam.cwiseSqrt().cwiseInverse();
  const Mat hi = Q * lam.cwiseInverse().asDiagonal() * Q.transpose();
  const auto solve = [&](const Mat& C) {
    Mat X = Q.transpose() * C * Q;
    for (Eigen::Index a = 0; a < X.rows(); ++a) {
      for (Eigen::Index b = 0; b < X.cols(); ++b) X(a, b) /= e(a) + e(b);
    }
    return Mat(Q * X * Q.transpose());
  };
  FrameJet f;
  f.E0 = Q * e.asDiagonal() * Q.transpose();
  f.dE0 = solve(-hi * j.dh * hi);
  f.ddE0 = solve(2.0 * hi * j.dh * hi * j.dh * hi - hi * j.ddh * hi - 2.0 * f.dE0 * f.dE0);
  return f;
}

Mat rotation_rate(const RosenJet& j, const FrameJet& f) { return -skew(f.E0 * j.h * f.dE0); }

Mat to_mat(const detail::OdeState& s, Eigen::Index m) { return Eigen::Map<const Mat>(s.data(), m, m); }

void from_mat(const Mat& a, detail::OdeState& s) { std::copy(a.data(), a.data() + a.size(), s.begin()); }

struct ProfileSample {
  Mat h;
  Mat M;
  Mat Mdot;
  Mat A;
  double orth = 0.0;
  double symm = 0.0;
  double asym = 0.0;
};

ProfileSample sample_profile(const RosenJet& j, const Mat& O, double positivity_tol) {
  const FrameJet f = inverse_sqrt_jet(j, positivity_tol);
  const Eigen::Index m = j.h.rows();
  const Mat W = rotation_rate(j, f);
  const Mat Xdot = f.dE0 * j.h * f.dE0 + f.E0 * j.dh * f.dE0 + f.E0 * j.h * f.ddE0;
  const Mat Wdot = -skew(Xdot);
  ProfileSample s;
  s.h = j.h;
  s.M = f.E0 * O;
  s.Mdot = f.dE0 * O + f.E0 * W * O;
  const Mat Mddot = f.ddE0 * O + 2.0 * f.dE0 * W * O + f.E0 * (Wdot + W * W) * O;
  const Mat raw = -(Mddot.transpose() * j.h + s.Mdot.transpose() * j.dh) * s.M;
  s.A = sym(raw);
  s.asym = max_abs(skew(raw));
  s.orth = max_abs(s.M.transpose() * j.h * s.M - Mat::Identity(m, m));
  s.symm = max_abs(skew(s.M.transpose() * j.h * s.Mdot));
  return s;
}

}  // namespace

BrinkmannProfile rosen_to_brinkmann(const RosenProfile& rosen, const BrinkmannOptions& opt) {
  if (opt.samples < 2 || !(opt.u_max > opt.u_min)) throw DomainError("bad Brinkmann grid");
  if (opt.u0 < opt.u_min || opt.u0 > opt.u_max) throw DomainError("u0 outside the interval");
  const Eigen::Index m = rosen.transverse_dim;
  std::vector<double> grid(static_cast<std::size_t>(opt.samples));
  for (int k = 0; k < opt.samples; ++k) {
    grid[static_cast<std::size_t>(k)] = opt.u_min + (opt.u_max - opt.u_min) * k / (opt.samples - 1);
  }

  const detail::OdeRhs rhs = [&rosen, &opt, m](const detail::OdeState& s, detail::OdeState& ds, double u) {
    const RosenJet j = rosen.jet(u);
    const FrameJet f = inverse_sqrt_jet(j, opt.positivity_tol);
    from_mat(rotation_rate(j, f) * to_mat(s, m), ds);
  };

  BrinkmannProfile out;
  std::map<double, ProfileSample> done;
  const ProfileSample start = sample_profile(rosen.jet(opt.u0), Mat::Identity(m, m), opt.positivity_tol);
  double truncated_at = 0.0;
  bool truncated = false;
  std::string note;

  for (int dir : {1, -1}) {
    std::vector<double> targets;
    for (double u : grid) {
      if ((dir > 0 && u >= opt.u0) || (dir < 0 && u < opt.u0)) targets.push_back(u);
    }
    if (dir < 0) std::reverse(targets.begin(), targets.end());
    detail::OdeState state(static_cast<std::size_t>(m * m));
    from_mat(Mat::Identity(m, m), state);
    double t = opt.u0;
    for (double u : targets) {
      if (u == opt.u0) {
        done.emplace(u, start);
        continue;
      }
      bool ok = positive_definite(rosen.h(u), opt.positivity_tol);
      if (ok && focal_point_between(rosen, t, u, opt.positivity_tol)) {
        ok = false;
        note = "focal point between grid samples";
      }
      if (ok) {
        double reached = t;
        try {
          const detail::OdeStop stop = detail::integrate_checked(
              rhs, state, t, u, opt.ode_tol, [](double, const detail::OdeState&) { return true; }, reached);
          ok = stop == detail::OdeStop::finished;
          if (!ok) note = "step size underflow";
        } catch (const DegeneracyError&) {
          ok = false;
        }
      }
      if (!ok) {
        // keep the failure closest to u0 on either side
        if (!truncated || std::abs(u - opt.u0) < std::abs(truncated_at - opt.u0)) truncated_at = u;
        truncated = true;
        if (note.empty()) note = "transverse block degenerates";
        break;
      }
      t = u;
      done.emplace(u, sample_profile(rosen.jet(u), to_mat(state, m), opt.positivity_tol));
    }
  }

  out.truncated = truncated;
  out.truncated_at = truncated_at;
  out.note = truncated ? note + " near u = " + format_double(truncated_at) : std::string();
  for (const auto& [u, s] : done) {
    out.u.push_back(u);
    out.h.push_back(s.h);
    out.M.push_back(s.M);
    out.Mdot.push_back(s.Mdot);
    out.A.push_back(s.A);
    out.orthonormality = std::max(out.orthonormality, s.orth);
    out.symmetry = std::max(out.symmetry, s.symm);
    out.a_symmetry = std::max(out.a_symmetry, s.asym);
  }
  return out;
}

RosenProfile jacobi_rosen(const std::function<Mat(double)>& A, int transverse_dim, double u0, double u_min,
                          double u_max, double ode_tol) {
  if (!(u_max > u_min) || u0 < u_min || u0 > u_max) throw DomainError("bad Jacobi interval");
  const Eigen::Index m = transverse_dim;
  const auto rhs = std::make_shared<detail::OdeRhs>([A, m](const detail::OdeState& s, detail::OdeState& ds, double u) {
    const Mat E = Eigen::Map<const Mat>(s.data(), m, m);
    const Mat dE = Eigen::Map<const Mat>(s.data() + m * m, m, m);
    const Mat ddE = A(u) * E;
    std::copy(dE.data(), dE.data() + m * m, ds.begin());
    std::copy(ddE.data(), ddE.data() + m * m, ds.begin() + m * m);
  });

  // stored states on a uniform node grid; evaluation restarts from the nearest node
  constexpr int kNodes = 257;
  const double step = (u_max - u_min) / (kNodes - 1);
  auto nodes = std::make_shared<std::vector<detail::OdeState>>(static_cast<std::size_t>(kNodes));
  const auto node_u = [u_min, step](int k) { return u_min + step * k; };
  const int k0 = static_cast<int>(std::lround((u0 - u_min) / step));
  detail::OdeState init(static_cast<std::size_t>(2 * m * m), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) init[static_cast<std::size_t>(i * m + i)] = 1.0;
  const auto advance = [rhs, ode_tol](detail::OdeState s, double t0, double t1) {
    double reached = t0;
    const detail::OdeStop stop =
        detail::integrate_checked(*rhs, s, t0, t1, ode_tol, [](double, const detail::OdeState&) { return true; }, reached);
    if (stop != detail::OdeStop::finished) throw SolverError("Jacobi frame integration failed");
    return s;
  };
  (*nodes)[static_cast<std::size_t>(k0)] = advance(init, u0, node_u(k0));
  for (int k = k0 + 1; k < kNodes; ++k) {
    (*nodes)[static_cast<std::size_t>(k)] = advance((*nodes)[static_cast<std::size_t>(k - 1)], node_u(k - 1), node_u(k));
  }
  for (int k = k0 - 1; k >= 0; --k) {
    (*nodes)[static_cast<std::size_t>(k)] = advance((*nodes)[static_cast<std::size_t>(k + 1)], node_u(k + 1), node_u(k));
  }

  RosenProfile p;
  p.transverse_dim = transverse_dim;
  p.jet = [A, m, nodes, node_u, advance, u_min, u_max, step](double u) {
    if (u < u_min - 1e-12 || u > u_max + 1e-12) throw DomainError("u outside the Jacobi interval");
    const int k = std::clamp(static_cast<int>(std::lround((u - u_min) / step)), 0, kNodes - 1);
    const detail::OdeState s = u == node_u(k) ? (*nodes)[static_cast<std::size_t>(k)]
                                              : advance((*nodes)[static_cast<std::size_t>(k)], node_u(k), u);
    const Mat E = Eigen::Map<const Mat>(s.data(), m, m);
    const Mat dE = Eigen::Map<const Mat>(s.data() + m * m, m, m);
    const Mat ddE = A(u) * E;
    RosenJet j;
    j.h = E.transpose() * E;
    j.dh = dE.transpose() * E + E.transpose() * dE;
    j.ddh = ddE.transpose() * E + 2.0 * dE.transpose() * dE + E.transpose() * ddE;
    return j;
  };
  return p;
}

Report brinkmann_roundtrip(const std::function<Mat(double)>& A, int transverse_dim, const BrinkmannOptions& opt,
                           double tol) {
  Report r("brinkmann roundtrip");
  const RosenProfile rosen = jacobi_rosen(A, transverse_dim, opt.u0, opt.u_min, opt.u_max, opt.ode_tol);
  const BrinkmannProfile b = rosen_to_brinkmann(rosen, opt);
  Table& tab = r.samples();
  tab.columns = {"u", "deviation"};
  for (std::size_t k = 0; k < b.u.size(); ++k) tab.add_row({b.u[k], max_abs(b.A[k] - A(b.u[k]))});
  r.add("recovered A", b.max_deviation(A), tol);
  r.add("M^T h M = I", b.orthonormality, 1e-8);
  r.add("M symmetry condition", b.symmetry, 1e-8);
  r.note("truncated", b.truncated);
  if (b.truncated) r.note("truncated_at", b.truncated_at);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct RosenLimitFn {
  std::shared_ptr<const RosenProfile> rosen;

  template <class T>
  T operator()(std::span<const T> x, std::span<const T> w) const {
    if (!series_exact_at(x[0], 3)) throw EvaluationError("limit metric is known to second order in x^0 only");
    const RosenJet j = rosen->jet(real_part(x[0]));
    T r = 2.0 * w[0] * w[1];
    const int m = rosen->transverse_dim;
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const std::array<double, 3> d{j.h(a, b), j.dh(a, b), j.ddh(a, b)};
        r = r - compose_series(x[0], std::span<const double>(d)) * w[static_cast<std::size_t>(a + 2)] *
                    w[static_cast<std::size_t>(b + 2)];
      }
    }
    return r;
  }
};

}  // namespace

Lagrangian limit_lagrangian(const RosenProfile& rosen, double u_min, double u_max) {
  const int n = rosen.transverse_dim + 2;
  auto shared = std::make_shared<const RosenProfile>(rosen);
  Lagrangian L = Lagrangian::from_generic("penrose_limit", n, RosenLimitFn{shared}, [n](const Vec&) {
    Vec c = Vec::Zero(n);
    c(0) = c(1) = 1.0;
    return c;
  });
  Region region = Region::cube(n, 1.0);
  region.bounds[0] = {u_min, u_max};
  return L.with_region(std::move(region));
}

PenroseLimitResult penrose_limit(const Lagrangian& L, const VectorField& N, const PenroseOptions& opt) {
  const int n = L.dim();
  const BrinkmannOptions& bo = opt.brinkmann;
  if (opt.brinkmann.samples < 2 || !(bo.u_max > bo.u_min)) throw DomainError("bad limit grid");
  const Vec e0 = unit_vector(n, 0);

  Report report("penrose limit");
  RosenProfile rosen = RosenProfile::from_lagrangian(L);
  Lagrangian limit = limit_lagrangian(rosen, bo.u_min, bo.u_max);
  const Vec e1 = unit_vector(n, 1);

  std::vector<Vec> ray;
  double block = 0.0;
  double shape = 0.0;
  for (int k = 0; k < bo.samples; ++k) {
    Vec x = Vec::Zero(n);
    x(0) = bo.u_min + (bo.u_max - bo.u_min) * k / (bo.samples - 1);
    if ((N(x) - e0).cwiseAbs().maxCoeff() > opt.shape_tol) {
      throw PreconditionError("N is not d/dx^0 on the base ray");
    }
    const LightlikeChartReport chart = lightlike_form_check(L, N, x, opt.shape_tol);
    if (!chart.shape_ok) throw PreconditionError("g_N does not have the lightlike chart shape on the base ray");
    if (!chart.h_posdef) {
      throw DegeneracyError("transverse block degenerates at u = " + format_double(x(0)) +
                            ": focal point on the base ray");
    }
    if (k > 0) {
      if (const auto focal = focal_point_between(rosen, ray.back()(0), x(0), bo.positivity_tol)) {
        throw DegeneracyError("transverse block degenerates at u = " + format_double(*focal) +
                              ": focal point on the base ray");
      }
    }
    const Mat h = rosen.h(x(0));
    const Mat g_lim = fundamental_matrix(limit, x, e1);
    Mat expected = Mat::Zero(n, n);
    expected(0, 1) = expected(1, 0) = 1.0;
    expected.bottomRightCorner(n - 2, n - 2) = -h;
    const double scale = std::max(1.0, max_abs(h));
    block = std::max(block, max_abs(h - chart.h_block) / scale);
    shape = std::max(shape, max_abs(g_lim - expected) / scale);
    ray.push_back(x);
  }
  report.add("limit block equals h on the base ray", block, 1e-14);
  report.add("limit metric has Rosen shape", shape, 1e-14);

  Rng rng(opt.seed);
  report.set_seed(opt.seed);
  std::vector<Vec> samples;
  for (int s = 0; s < opt.homothety_samples; ++s) samples.push_back(sample_point(L.region(), rng));

  Table homothety;
  homothety.columns = {"omega", "metric_residual", "connection_residual"};
  for (double w : opt.omegas) {
    const Report hm = homothety_residual(L, N, w, samples, opt.homothety_tol);
    const Report hc = homothety_connection_residual(L, N, w, samples, opt.connection_tol);
    const std::string prefix = "omega=" + format_double(w) + ": ";
    report.merge(hm, prefix);
    report.merge(hc, prefix);
    homothety.add_row({w, hm.max_residual(), hc.max_residual()});
  }

  // ray points with their x^1 and transverse slots pulled in as W -> 0
  std::vector<Vec> decay;
  for (std::size_t s = 0; s < samples.size() && s < ray.size(); ++s) {
    Vec x = samples[s];
    x(0) = ray[s](0);
    decay.push_back(x);
  }
  report.merge(limit_decay_check(L, N, decay));

  BrinkmannProfile brinkmann = rosen_to_brinkmann(rosen, bo);
  report.add("M^T h M = I", brinkmann.orthonormality, 1e-8);
  report.add("M symmetry condition", brinkmann.symmetry, 1e-8);
  report.note("truncated", brinkmann.truncated);
  if (brinkmann.truncated) report.note("truncated_at", brinkmann.truncated_at);

  std::vector<Vec> wave_samples;
  const int stride = std::max(1, static_cast<int>(ray.size()) / std::max(1, opt.ppwave_samples));
  for (std::size_t k = 0; k < ray.size(); k += static_cast<std::size_t>(stride)) {
    Vec x = ray[k];
    for (int i = 1; i < n; ++i) x(i) = rng.uniform(-0.5, 0.5);
    wave_samples.push_back(x);
  }
  report.merge(ppwave_condition(limit, VectorField::coordinate(n, 1), wave_samples), "limit: ");

  return PenroseLimitResult{std::move(rosen), std::move(limit), std::move(brinkmann), std::move(homothety),
                            std::move(report)};
}

}  // namespace finsler
