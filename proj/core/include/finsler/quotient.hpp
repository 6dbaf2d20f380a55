#pragma once

// The screen bundle N-perp / N: its positive metric and the holonomy of the
// induced connection.

#include "finsler/connection.hpp"
#include "finsler/lagrangian.hpp"
#include "finsler/types.hpp"

#include <vector>

namespace finsler {

struct QuotientFrame {
  Vec x;
  Mat reps;  // columns span N-perp mod N
  Mat gbar;  // -g_N on the representatives
};

/// Throws DomainError if a representative is not in N-perp and RankError if
/// the representatives are dependent modulo N.
QuotientFrame quotient_metric(const Lagrangian& L, const VectorField& N, const Vec& x, const Mat& reps,
                              double tol = 1e-9);

/// Closed polyline; the last vertex connects back to the first.
struct Loop {
  std::vector<Vec> vertices;

  /// Axis-aligned rectangle centred at `center` in coordinates (a, b),
  /// traversed +a, +b, -a, -b.
  static Loop rectangle(const Vec& center, int a, int b, double side_a, double side_b);
  double coordinate_area(int a, int b) const;
};

struct HolonomyOptions {
  int min_segments = 64;  // over the whole loop
  bool richardson = true;
  double screen_tol = 1e-8;
};

struct HolonomyResult {
  Mat holonomy;           // action on classes, in a gbar-orthonormal basis
  double defect = 0.0;    // || holonomy - I ||_2
  double transverse = 0.0;  // largest component leaving N-perp
  int segments = 0;
};

/// Transports classes [Y] around the loop with nabla^N (implicit midpoint
/// per segment, extrapolated in the segment count).
HolonomyResult holonomy(const Lagrangian& L, const VectorField& N, const Loop& loop, const Mat& reps,
                        const HolonomyOptions& opt = {});

double holonomy_defect(const Lagrangian& L, const VectorField& N, const Loop& loop, const Mat& reps,
                       const HolonomyOptions& opt = {});

/// R(d_a, d_b) acting on classes at x, in a gbar-orthonormal basis; the
/// small-loop holonomy defect is about area_ab times its spectral norm.
Mat quotient_curvature(const Lagrangian& L, const VectorField& N, const Vec& x, int a, int b, const Mat& reps);

/// Transport of a single vector around the loop in the full tangent space.
Vec transport_around(const Lagrangian& L, const VectorField& N, const Loop& loop, const Vec& y, int segments);

}  // namespace finsler
