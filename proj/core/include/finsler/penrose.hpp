#pragma once

// Plane-wave limit of a lightlike chart (N = d/dx^0): rescaling, homothety
// checks, the Rosen profile on the base ray and its Brinkmann form.
//
// Sign convention. With L of signature (+, -, ..., -) the transverse block of
// g_N is -h with h positive definite. Brinkmann profiles report A through
// the Jacobi equation E'' = A E of the Rosen frame, h = E^T E, i.e.
//   A = -(M''^T h + M'^T h') M,
// which is the wave profile H = x^T A x of 2 du dv + H du^2 + |dx|^2. In the
// (+, -, ..., -) chart 2 du dv - H du^2 - |dx|^2 carries the same geometry.

#include "finsler/connection.hpp"
#include "finsler/lagrangian.hpp"
#include "finsler/report.hpp"
#include "finsler/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace finsler {

struct RosenJet {
  Mat h;    // transverse block, positive definite
  Mat dh;   // d/du
  Mat ddh;  // d^2/du^2
};

struct RosenProfile {
  int transverse_dim = 0;
  std::function<RosenJet(double)> jet;

  Mat h(double u) const { return jet(u).h; }

  /// h(u) = -g_N restricted to x^2.. at (u, 0, ..., 0), N = e_0, from exact jets.
  static RosenProfile from_lagrangian(const Lagrangian& L);
  /// h = diag(axis_i(u)).
  static RosenProfile diagonal(const std::vector<std::function<double(double)>>& axes,
                               const std::vector<std::function<double(double)>>& d_axes,
                               const std::vector<std::function<double(double)>>& dd_axes);
  static RosenProfile constant(const Mat& h);
};

/// Ray: h positive definite (Cholesky) and not within rel_tol of singular.
bool positive_definite(const Mat& h, double rel_tol = 1e-12);

/// Focal point of the profile strictly inside (a, b) that grid samples miss:
/// a local minimum of det h, located from the sign change of d log det h =
/// tr(h^{-1} h'), at which h is no longer positive definite.
std::optional<double> focal_point_between(const RosenProfile& rosen, double a, double b,
                                          double positivity_tol = 1e-10);

// ---------------------------------------------------------------------------
// Rescaling x = phi^{-1}(x~) = (x~0, W^2 x~1, W x~2, ...).

Vec rescale_to_chart(const Vec& xt, double omega);

/// Jacobian dx/dx~ = diag(1, W^2, W, ...).
Vec rescale_weights(int n, double omega);

/// The rescaled metric table at x~: 0 and 1 in the N row, W^2 g_11, W g_1i
/// and the unscaled transverse block, all from g_N at phi^{-1}(x~).
Mat rescaled_metric(const Lagrangian& L, const VectorField& N, const Vec& xt, double omega);

/// (phi^{-1})^* g_N = W^2 g_W at every sample, relative to the size of the
/// left side. Throws DomainError if phi^{-1}(sample) leaves the region of L.
Report homothety_residual(const Lagrangian& L, const VectorField& N, double omega, const std::vector<Vec>& samples,
                          double tol = 1e-9);

/// Levi-Civita symbols of g_W and of (phi^{-1})^* g_N agree.
Report homothety_connection_residual(const Lagrangian& L, const VectorField& N, double omega,
                                     const std::vector<Vec>& samples, double tol = 1e-8);

/// Decay of the W-weighted entries of g_W at fixed x~: (g_W)_11 at least
/// like W^2 and (g_W)_1i at least like W, over the given omegas.
Report limit_decay_check(const Lagrangian& L, const VectorField& N, const std::vector<Vec>& samples,
                         const std::vector<double>& omegas = {0.2, 0.1, 0.05}, double tol = 0.05);

// ---------------------------------------------------------------------------

struct BrinkmannProfile {
  std::vector<double> u;
  std::vector<Mat> h;
  std::vector<Mat> M;
  std::vector<Mat> Mdot;
  std::vector<Mat> A;
  bool truncated = false;
  double truncated_at = 0.0;
  std::string note;
  double orthonormality = 0.0;  // max |M^T h M - I|
  double symmetry = 0.0;        // max |antisym(M^T h M')|
  double a_symmetry = 0.0;      // max |antisym(A)| before symmetrization

  Table to_table() const;  // u, h.., M.., A.. row-major
  /// Max deviation of A(u) from the given profile on the grid.
  double max_deviation(const std::function<Mat(double)>& expected) const;
};

struct BrinkmannOptions {
  double u0 = 0.0;
  double u_min = -1.0;
  double u_max = 1.0;
  int samples = 41;
  double ode_tol = 1e-12;
  double positivity_tol = 1e-10;
};

/// M = E0 O with E0 = h^{-1/2} and O' = -skew(E0 h E0') O, O(u0) = I.
/// Stops at the first grid point (moving away from u0) where h is not
/// positive definite and flags the profile as truncated.
BrinkmannProfile rosen_to_brinkmann(const RosenProfile& rosen, const BrinkmannOptions& opt = {});

/// Rosen profile h = E^T E of the Jacobi frame E'' = A E, E(u0) = I, E'(u0) = 0.
RosenProfile jacobi_rosen(const std::function<Mat(double)>& A, int transverse_dim, double u0, double u_min,
                          double u_max, double ode_tol = 1e-12);

/// A -> h -> A: max deviation of the recovered profile, M-conditions.
Report brinkmann_roundtrip(const std::function<Mat(double)>& A, int transverse_dim, const BrinkmannOptions& opt = {},
                           double tol = 1e-6);

// ---------------------------------------------------------------------------

/// 2 w0 w1 - w_T^T h(x^0) w_T, exact in x^0 up to second order; the lightlike
/// field d/dx^1 is parallel.
Lagrangian limit_lagrangian(const RosenProfile& rosen, double u_min, double u_max);

struct PenroseOptions {
  BrinkmannOptions brinkmann;
  std::vector<double> omegas{1.0, 0.5, 0.1};
  int homothety_samples = 50;
  int ppwave_samples = 8;
  std::uint64_t seed = 1;
  double homothety_tol = 1e-9;
  double connection_tol = 1e-8;
  double shape_tol = 1e-10;
};

struct PenroseLimitResult {
  RosenProfile rosen;
  Lagrangian limit;
  BrinkmannProfile brinkmann;
  Table homothety;  // omega, metric_residual, connection_residual
  Report report;
};

/// Requires N = e_0 and the lightlike shape of g_N on the grid of the ray
/// (u, 0, ..., 0); throws DegeneracyError if h degenerates there.
PenroseLimitResult penrose_limit(const Lagrangian& L, const VectorField& N, const PenroseOptions& opt = {});

}  // namespace finsler
