#include "finsler/lagrangian.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace finsler {

namespace {

constexpr int kSegmentSamples = 16;

double eval_checked(const Lagrangian& L, const Vec& x, const Vec& v) {
  const double val = L(x, v);
  if (!std::isfinite(val)) throw EvaluationError("non-finite Lagrangian value in " + L.name());
  return val;
}

/// Segment parameters from a to b: the uniform samples after a, plus the
/// point closest to the origin, which catches segments through the apex.
std::vector<double> segment_params(const Vec& a, const Vec& b) {
  std::vector<double> s;
  for (int k = 1; k < kSegmentSamples; ++k) s.push_back(static_cast<double>(k) / (kSegmentSamples - 1));
  const double d2 = (a - b).squaredNorm();
  if (d2 > 0.0) {
    const double closest = a.dot(a - b) / d2;
    if (closest > 0.0 && closest < 1.0) s.push_back(closest);
  }
  return s;
}

constexpr double kApexTol = 1e-8;

}  // namespace

bool Region::contains(const Vec& x) const {
  if (static_cast<std::size_t>(x.size()) != bounds.size()) return false;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const double xi = x(static_cast<Eigen::Index>(i));
    if (xi < bounds[i].first || xi > bounds[i].second) return false;
  }
  return true;
}

double Lagrangian::operator()(const Vec& x, const Vec& v) const {
  if (x.size() != dim_ || v.size() != dim_) throw DomainError("dimension mismatch evaluating " + name_);
  return fns_->f0(std::span<const double>(x.data(), static_cast<std::size_t>(dim_)),
                  std::span<const double>(v.data(), static_cast<std::size_t>(dim_)));
}

ConeMembership is_admissible(const Lagrangian& L, const Vec& x, const Vec& v) {
  const double nv = v.norm();
  if (nv == 0.0) throw DomainError("zero vector has no cone membership");
  ConeMembership out;
  out.value = eval_checked(L, x, v);
  const Vec a = v / nv;
  const Vec c = L.cone_ref(x);
  const Vec b = c / c.norm();
  double margin = out.value / (nv * nv);
  for (const double s : segment_params(a, b)) {
    const Vec w = (1.0 - s) * a + s * b;
    const double nw = w.norm();
    if (nw <= kApexTol) {
      margin = std::min(margin, 0.0);
      continue;
    }
    margin = std::min(margin, eval_checked(L, x, w) / (nw * nw));
  }
  out.margin = margin;
  out.inside = out.value > 0.0 && margin > 0.0;
  return out;
}

bool in_closure(const Lagrangian& L, const Vec& x, const Vec& v, double rel_tol) {
  const double nv = v.norm();
  if (nv == 0.0) throw DomainError("zero vector has no cone membership");
  const Vec a = v / nv;
  if (eval_checked(L, x, a) < -rel_tol) return false;
  const Vec c = L.cone_ref(x);
  const Vec b = c / c.norm();
  for (const double s : segment_params(a, b)) {
    const Vec w = (1.0 - s) * a + s * b;
    if (w.norm() <= kApexTol || eval_checked(L, x, w) <= 0.0) return false;
  }
  return true;
}

void require_admissible(const Lagrangian& L, const Vec& x, const Vec& v, const char* where) {
  if (!in_closure(L, x, v)) {
    throw ConeViolation(std::string(where) + ": vector outside the admissible cone of " + L.name());
  }
}

}  // namespace finsler
