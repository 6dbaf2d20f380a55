#pragma once

// Lightlike charts with N = d_0: shape certification, the parallelism
// criterion, the transverse-determinant focal scan and closed-form
// Brinkmann symbols.

#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/lagrangian.hpp"
#include "finsler/report.hpp"
#include "finsler/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace finsler {

struct LightlikeChartReport {
  bool shape_ok = false;  // g_00 = 0, g_01 = 1, g_0i = 0 for i >= 2
  Mat h_block;            // -g_N restricted to the transverse coordinates
  bool h_posdef = false;  // all leading principal minors positive
  Vec residuals;          // |g_00|, |g_01 - 1|, |g_0i| ...
  double max_residual = 0.0;

  Report to_report() const;
};

LightlikeChartReport lightlike_form_check(const Lagrangian& L, const VectorField& N, const Vec& x,
                                          double tol = 1e-10);

/// d_0 g_ij(N) = 0 on the samples, cross-checked against nabla^N N = 0.
Report parallel_criterion(const Lagrangian& L, const VectorField& N, const std::vector<Vec>& samples,
                          double tol = 1e-8);

/// A parametrized curve with its velocity.
struct Ray {
  std::function<Vec(double)> point;
  std::function<Vec(double)> velocity;
  double t0 = 0.0;
  double t1 = 1.0;

  static Ray line(const Vec& origin, const Vec& direction, double t0, double t1);
  static Ray path(const GeodesicPath& path);
};

struct FocalRoot {
  double t = 0.0;
  bool degenerate = false;  // even-order zero of det h, multiplicity >= 2
  double det_at_root = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

struct DeltaCurve {
  std::vector<double> params;
  std::vector<double> delta;       // sqrt(det h), NaN where det h < 0
  std::vector<double> det_h;
  std::vector<double> delta_full;  // sqrt(|det g_N|)
  std::vector<FocalRoot> roots;
  std::vector<std::pair<double, double>> breakdown;  // flagged intervals

  double max_delta_mismatch() const;
  Table to_table() const;  // t, delta, det_h
  Json roots_json() const;
};

struct DeltaScanOptions {
  int samples = 401;
  int chebyshev_nodes = 16;
  double param_tol = 1e-12;
  double shape_tol = 1e-8;
};

DeltaCurve delta_scan(const Lagrangian& L, const VectorField& N, const Ray& ray, const DeltaScanOptions& opt = {});

/// Closed-form Chern symbols of 2 dv du + H du^2 + s (dx^2 + dy^2) in
/// coordinates (v, u, x, y):
///   Gamma^v_xu = H_x / 2, Gamma^v_yu = H_y / 2, Gamma^v_uu = H_u / 2,
///   Gamma^x_uu = -H_x / (2 s), Gamma^y_uu = -H_y / (2 s).
Tensor3 brinkmann_oracle(const WaveProfile& H, const Vec& x, TransverseSign sign = TransverseSign::negative);

}  // namespace finsler
