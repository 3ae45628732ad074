#include "sxr/plane.hpp"

#include <cmath>
#include <limits>

namespace sxr {

PlaneFrame::PlaneFrame(const Bundle& x, const Bundle& v, double prop_tol)
    : x_(x.vec()), v_(v.vec()) {
  if (x_.size() != v_.size()) throw DomainError("frame endpoints differ in dimension");
  const Eigen::Index n = x_.size();

  a1_ = x_ / x_.norm();
  Vec v_unit = v_ / v_.norm();
  proportional_ = (v_unit - a1_).norm() < prop_tol;

  w_star_ = (v_.dot(x_)) * v_ - (v_.dot(v_)) * x_;

  if (proportional_) {
    a2_ = Vec::Zero(n);
    c_ = 0.0;
    v1_ = a1_;
    v2_ = a1_;
    y1_ = x_;
    y2_ = x_;
    triangle_cond_ = 1.0;
    return;
  }

  Vec rej = v_ - (v_.dot(a1_)) * a1_;
  c_ = x_.norm() * rej.norm();
  // Second orthogonalization pass: for nearly proportional pairs the
  // single rejection is dominated by cancellation and the basis comes
  // out slightly skew, which poisons every projection downstream.
  rej -= (rej.dot(a1_)) * a1_;
  a2_ = rej / rej.norm();

  // Extremes of the projected orthant. Every projected axis direction
  // P e_i has (P e_i).a1 = x_i / |x| > 0, so the projected cone lives in
  // the open half plane {w.a1 > 0} and its angular extremes are attained
  // at generators.
  double ang_hi = -std::numeric_limits<double>::infinity();
  double ang_lo = std::numeric_limits<double>::infinity();
  Eigen::Index hi_idx = -1, lo_idx = -1;
  for (Eigen::Index i = 0; i < n; ++i) {
    double ca = a1_[i];  // e_i . a1
    double sa = a2_[i];  // e_i . a2
    double len = std::hypot(ca, sa);
    if (len < 1e-300) continue;  // cannot happen for x in the open orthant
    double ang = std::atan2(sa, ca);
    if (ang > ang_hi) {
      ang_hi = ang;
      hi_idx = i;
    }
    if (ang < ang_lo) {
      ang_lo = ang;
      lo_idx = i;
    }
  }
  if (hi_idx < 0 || lo_idx < 0) throw SolverError("degenerate projected cone");
  auto unit_generator = [&](Eigen::Index i) {
    Vec w = a1_[i] * a1_ + a2_[i] * a2_;
    return Vec(w / w.norm());
  };
  v1_ = unit_generator(hi_idx);
  v2_ = unit_generator(lo_idx);

  // y_i = intersection of {s v} with {x + t R v_i}, solved in the
  // (a1, a2) coordinates of the plane.
  auto intersect_ray = [&](const Vec& rv, double& cond) {
    Eigen::Matrix2d m;
    m << v_.dot(a1_), -rv.dot(a1_), v_.dot(a2_), -rv.dot(a2_);
    Eigen::Vector2d b(x_.dot(a1_), x_.dot(a2_));
    double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double scale = m.cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
    cond = svd.singularValues()(1) > 0.0
               ? svd.singularValues()(0) / svd.singularValues()(1)
               : std::numeric_limits<double>::infinity();
    if (std::abs(det) < 1e-14 * scale * scale)
      throw SolverError(
          "triangle construction: intersection lines are nearly parallel (condition number " +
          std::to_string(cond) + ")");
    Eigen::Vector2d st = m.inverse() * b;
    return Vec(st[0] * v_);
  };
  double cond1 = 1.0, cond2 = 1.0;
  y1_ = intersect_ray(rotate(v1_), cond1);
  y2_ = intersect_ray(rotate(v2_), cond2);
  triangle_cond_ = std::max(cond1, cond2);

  if (!strictly_positive(y1_) || !strictly_positive(y2_))
    throw SolverError("triangle vertex left the positive orthant");
}

Vec PlaneFrame::project(const Vec& y) const {
  if (proportional_) return (y.dot(a1_)) * a1_;
  return (y.dot(a1_)) * a1_ + (y.dot(a2_)) * a2_;
}

Vec PlaneFrame::rotate(const Vec& w) const {
  if (proportional_) return Vec::Zero(w.size());
  Vec in_plane = project(w);
  if ((w - in_plane).norm() > 1e-9 * w.norm())
    throw DomainError("rotation input lies outside the frame plane");
  return (w.dot(a1_)) * a2_ - (w.dot(a2_)) * a1_;
}

Vec PlaneFrame::flow_direction(const Vec& y) const {
  if (proportional_) return Vec::Zero(y.size());
  Vec p = project(y);
  return c_ * ((p.dot(a1_)) * a2_ - (p.dot(a2_)) * a1_);
}

}  // namespace sxr
