#include "finsler/ppwave.hpp"

#include "finsler/tensors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace finsler {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool leading_minors_positive(const Mat& h) {
  for (Eigen::Index k = 1; k <= h.rows(); ++k) {
    if (!(h.topLeftCorner(k, k).determinant() > 0.0)) return false;
  }
  return true;
}

Mat adjugate(const Mat& a) {
  const Eigen::Index m = a.rows();
  if (m == 1) return Mat::Ones(1, 1);
  Mat adj(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      Mat minor(m - 1, m - 1);
      for (Eigen::Index r = 0, rr = 0; r < m; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, cc = 0; c < m; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      adj(j, i) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
    }
  }
  return adj;
}

struct ScanPoint {
  double det = kNaN;
  double ddet = kNaN;
  double det_full = kNaN;
  bool shape_ok = false;
  bool posdef = false;
};

}  // namespace

Report LightlikeChartReport::to_report() const {
  Report r("lightlike chart");
  r.add("g_N shape", max_residual, 1e-10);
  r.add_verdict("h positive definite", h_posdef ? 0.0 : 1.0, 0.0, h_posdef);
  return r;
}

LightlikeChartReport lightlike_form_check(const Lagrangian& L, const VectorField& N, const Vec& x, double tol) {
  const int n = L.dim();
  const Mat g = fundamental_matrix(L, x, N(x));
  LightlikeChartReport out;
  out.residuals = Vec(n);
  out.residuals(0) = std::abs(g(0, 0));
  out.residuals(1) = std::abs(g(0, 1) - 1.0);
  for (int i = 2; i < n; ++i) out.residuals(i) = std::abs(g(0, i));
  out.max_residual = out.residuals.maxCoeff();
  out.shape_ok = out.max_residual <= tol;
  out.h_block = -g.bottomRightCorner(n - 2, n - 2);
  out.h_posdef = leading_minors_positive(out.h_block);
  return out;
}

Report parallel_criterion(const Lagrangian& L, const VectorField& N, const std::vector<Vec>& samples, double tol) {
  Report r("parallel criterion");
  double shape = 0.0;
  double d0 = 0.0;
  double nabla = 0.0;
  Table& tab = r.samples();
  tab.columns = {"sample", "shape", "d0_g", "nabla_N"};
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec& x = samples[s];
    const LightlikeChartReport chart = lightlike_form_check(L, N, x);
    shape = std::max(shape, chart.max_residual);
    const Tensor3 dg = metric_field_derivative(L, N, x);
    double m = 0.0;
    for (int i = 0; i < L.dim(); ++i) {
      for (int j = 0; j < L.dim(); ++j) m = std::max(m, std::abs(dg(0, i, j)));
    }
    const double nr = parallel_residual(L, N, x);
    d0 = std::max(d0, m);
    nabla = std::max(nabla, nr);
    tab.add_row({static_cast<double>(s), chart.max_residual, m, nr});
  }
  r.add("lightlike chart shape", shape, 1e-10);
  if (shape > 1e-10) {
    r.set_precondition_failure("g_N does not have the lightlike chart shape");
    return r;
  }
  r.add("d_0 g_ij(N) = 0", d0, tol);
  r.add("nabla^N N = 0", nabla, tol);
  return r;
}

Ray Ray::line(const Vec& origin, const Vec& direction, double t0, double t1) {
  Ray r;
  r.point = [origin, direction](double t) { return Vec(origin + t * direction); };
  r.velocity = [direction](double) { return direction; };
  r.t0 = t0;
  r.t1 = t1;
  return r;
}

Ray Ray::path(const GeodesicPath& path) {
  Ray r;
  r.point = [path](double t) { return path.at(t).x; };
  r.velocity = [path](double t) { return path.at(t).v; };
  r.t0 = path.t_begin();
  r.t1 = path.t_end();
  return r;
}

double DeltaCurve::max_delta_mismatch() const {
  double m = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (std::isnan(delta[i]) || std::isnan(delta_full[i])) continue;
    m = std::max(m, std::abs(delta[i] - delta_full[i]));
  }
  return m;
}

Table DeltaCurve::to_table() const {
  Table t;
  t.columns = {"t", "delta", "det_h"};
  for (std::size_t i = 0; i < params.size(); ++i) t.add_row({params[i], delta[i], det_h[i]});
  return t;
}

Json DeltaCurve::roots_json() const {
  Json j = Json::object();
  Json roots_arr = Json::array();
  for (const FocalRoot& r : roots) {
    Json e = Json::object();
    e["t"] = r.t;
    e["kind"] = r.degenerate ? "degenerate" : "crossing";
    e["multiplicity_at_least"] = r.degenerate ? 2 : 1;
    e["det_h"] = r.det_at_root;
    e["bracket"] = Json::array({r.bracket_lo, r.bracket_hi});
    roots_arr.push_back(std::move(e));
  }
  j["roots"] = std::move(roots_arr);
  Json br = Json::array();
  for (const auto& [a, b] : breakdown) br.push_back(Json::array({a, b}));
  j["chart_breakdown"] = std::move(br);
  j["delta_full_mismatch"] = max_delta_mismatch();
  return j;
}

DeltaCurve delta_scan(const Lagrangian& L, const VectorField& N, const Ray& ray, const DeltaScanOptions& opt) {
  const int n = L.dim();
  const int m = n - 2;
  if (m < 1) throw DomainError("delta_scan needs at least one transverse direction");
  if (opt.samples < 3) throw DomainError("delta_scan needs at least three samples");

  const auto eval = [&](double t, bool with_derivative) {
    ScanPoint p;
    try {
      const Vec x = ray.point(t);
      const Vec nv = N(x);
      const Mat g = fundamental_matrix(L, x, nv);
      double shape = std::max(std::abs(g(0, 0)), std::abs(g(0, 1) - 1.0));
      for (int i = 2; i < n; ++i) shape = std::max(shape, std::abs(g(0, i)));
      p.shape_ok = shape <= opt.shape_tol;
      const Mat h = -g.bottomRightCorner(m, m);
      p.det = h.determinant();
      p.posdef = leading_minors_positive(h);
      p.det_full = g.determinant();
      if (with_derivative) {
        const Vec xd = ray.velocity(t);
        const Tensor3 dg = metric_field_derivative(L, N, x);
        Mat hdot = Mat::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) {
            for (int k = 0; k < n; ++k) hdot(i, j) -= dg(k, i + 2, j + 2) * xd(k);
          }
        }
        p.ddet = (adjugate(h) * hdot).trace();
      }
    } catch (const Error&) {
      p = ScanPoint{};
    }
    return p;
  };

  DeltaCurve curve;
  const int ns = opt.samples;
  std::vector<ScanPoint> pts(static_cast<std::size_t>(ns));
  for (int k = 0; k < ns; ++k) {
    const double t = ray.t0 + (ray.t1 - ray.t0) * k / (ns - 1);
    pts[k] = eval(t, false);
    curve.params.push_back(t);
    curve.det_h.push_back(pts[k].det);
    curve.delta.push_back(pts[k].det >= 0.0 ? std::sqrt(pts[k].det) : kNaN);
    curve.delta_full.push_back(std::isnan(pts[k].det_full) ? kNaN : std::sqrt(std::abs(pts[k].det_full)));
  }
  double scale = 0.0;
  for (const ScanPoint& p : pts) {
    if (std::isfinite(p.det)) scale = std::max(scale, std::abs(p.det));
  }
  const double zero_tol = 1e-9 * std::max(scale, 1e-300);

  const auto bisect = [&](double a, double b, bool on_derivative) {
    const auto f = [&](double t) {
      const ScanPoint p = eval(t, on_derivative);
      return on_derivative ? p.ddet : p.det;
    };
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > opt.param_tol; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };
  const auto add_crossing = [&](double a, double b) {
    FocalRoot r;
    r.t = bisect(a, b, false);
    r.det_at_root = eval(r.t, false).det;
    r.bracket_lo = a;
    r.bracket_hi = b;
    curve.roots.push_back(r);
  };

  for (int k = 0; k + 1 < ns; ++k) {
    const double ta = curve.params[k];
    const double tb = curve.params[k + 1];
    const double da = pts[k].det;
    const double db = pts[k + 1].det;
    if (!std::isfinite(da) || !std::isfinite(db)) continue;
    if (da == 0.0 && k == 0) {
      curve.roots.push_back({ta, false, 0.0, ta, ta});
      continue;
    }
    if (db == 0.0) {
      // exact grid hit: classify by the neighbours
      const double dn = k + 2 < ns ? pts[k + 2].det : da;
      curve.roots.push_back({tb, (da > 0.0) == (dn > 0.0), 0.0, ta, k + 2 < ns ? curve.params[k + 2] : tb});
      continue;
    }
    if (da == 0.0) continue;
    if ((da > 0.0) != (db > 0.0)) {
      add_crossing(ta, tb);
      continue;
    }
    // candidate even-order zero or a hidden pair of crossings near a local
    // minimum of |det h|
    const int jm = std::abs(da) <= std::abs(db) ? k : k + 1;
    const double dm = std::abs(pts[jm].det);
    const bool local_min = (jm == 0 || !(std::abs(pts[jm - 1].det) < dm)) &&
                           (jm + 1 >= ns || !(std::abs(pts[jm + 1].det) < dm));
    if (!local_min) continue;
    if (std::min(std::abs(da), std::abs(db)) > 1e-2 * scale) continue;
    // Chebyshev nodes on [ta, tb]
    const int nc = std::max(opt.chebyshev_nodes, 2);
    std::vector<double> nodes{ta};
    for (int j = nc - 1; j >= 0; --j) {
      nodes.push_back(0.5 * (ta + tb) + 0.5 * (tb - ta) * std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * nc)));
    }
    nodes.push_back(tb);
    std::vector<double> dd(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) dd[j] = eval(nodes[j], true).ddet;
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
      if (!std::isfinite(dd[j]) || !std::isfinite(dd[j + 1])) continue;
      if ((dd[j] > 0.0) == (dd[j + 1] > 0.0) && dd[j + 1] != 0.0) continue;
      const double tc = dd[j + 1] == 0.0 ? nodes[j + 1] : bisect(nodes[j], nodes[j + 1], true);
      const double dc = eval(tc, false).det;
      if ((dc > 0.0) != (da > 0.0) && dc != 0.0) {
        add_crossing(ta, tc);
        add_crossing(tc, tb);
      } else if (std::abs(dc) <= zero_tol) {
        curve.roots.push_back({tc, true, dc, nodes[j], nodes[j + 1]});
      }
    }
  }
  std::sort(curve.roots.begin(), curve.roots.end(), [](const FocalRoot& a, const FocalRoot& b) { return a.t < b.t; });
  curve.roots.erase(std::unique(curve.roots.begin(), curve.roots.end(),
                                [&](const FocalRoot& a, const FocalRoot& b) { return std::abs(a.t - b.t) <= 10 * opt.param_tol; }),
                    curve.roots.end());

  // chart breakdown: template lost, evaluation failed, or positivity lost
  // away from a located root
  const auto root_in = [&](double a, double b) {
    return std::any_of(curve.roots.begin(), curve.roots.end(),
                       [&](const FocalRoot& r) { return r.t >= a - opt.param_tol && r.t <= b + opt.param_tol; });
  };
  bool was_posdef = true;
  for (int k = 0; k < ns; ++k) {
    const ScanPoint& p = pts[k];
    const double ta = curve.params[std::max(k - 1, 0)];
    const double tb = curve.params[k];
    bool bad = !p.shape_ok || !std::isfinite(p.det);
    if (!bad && !p.posdef && was_posdef && !(k > 0 && root_in(ta, tb))) bad = true;
    if (!bad && !p.posdef && k == 0) bad = true;
    was_posdef = p.posdef;
    if (!bad) continue;
    if (!curve.breakdown.empty() && curve.breakdown.back().second >= ta) {
      curve.breakdown.back().second = tb;
    } else {
      curve.breakdown.emplace_back(ta, tb);
    }
  }
  return curve;
}

Tensor3 brinkmann_oracle(const WaveProfile& H, const Vec& x, TransverseSign sign) {
  const double s = sign == TransverseSign::negative ? -1.0 : 1.0;
  const Eigen::Vector3d d = H.gradient(x(1), x(2), x(3));  // (H_u, H_x, H_y)
  Tensor3 G(4);
  G(0, 2, 1) = G(0, 1, 2) = 0.5 * d(1);
  G(0, 3, 1) = G(0, 1, 3) = 0.5 * d(2);
  G(0, 1, 1) = 0.5 * d(0);
  G(2, 1, 1) = -d(1) / (2.0 * s);
  G(3, 1, 1) = -d(2) / (2.0 * s);
  return G;
}

}  // namespace finsler
