#pragma once

#include "sxr/types.hpp"

namespace sxr {

/// Geometry of the 2-plane spanned by a pair (x, v) of bundles:
/// orthonormal basis, orthogonal projection, quarter-turn rotation, the
/// extreme directions of the projected positive orthant, and the triangle
/// between x and the ray of v that traps the indifference path.
///
/// Key identity (exact in exact arithmetic, and the reason this object
/// exists): for any y,  (y.x) v - (y.v) x = C * R(P y).
class PlaneFrame {
 public:
  /// prop_tol is the threshold on || x/|x| - v/|v| || below which the
  /// pair counts as proportional; the proportional branch is exact and
  /// fragile to detect any tighter.
  PlaneFrame(const Bundle& x, const Bundle& v, double prop_tol = 1e-10);

  const Vec& x() const { return x_; }
  const Vec& v() const { return v_; }
  bool proportional() const { return proportional_; }

  const Vec& a1() const { return a1_; }
  const Vec& a2() const { return a2_; }  // zero vector when proportional
  double C() const { return c_; }        // |x| * |v - (v.a1) a1|
  const Vec& w_star() const { return w_star_; }  // (v.x) v - (v.v) x

  /// Extreme unit directions of the projected orthant: v1 on the a2 >= 0
  /// side, v2 on the a2 <= 0 side; both equal a1 in the proportional case.
  const Vec& cone_hi() const { return v1_; }
  const Vec& cone_lo() const { return v2_; }

  /// Triangle vertices on the ray of v. Proportional case: y1 = y2 = x.
  const Vec& y1() const { return y1_; }
  const Vec& y2() const { return y2_; }

  /// Condition number of the 2x2 line-intersection solve behind y1/y2
  /// (1 for the proportional case).
  double triangle_condition() const { return triangle_cond_; }

  /// Orthogonal projection onto span{x, v}: P y = (y.a1) a1 + (y.a2) a2.
  Vec project(const Vec& y) const;

  /// Quarter turn within the plane: R w = (w.a1) a2 - (w.a2) a1.
  /// Throws DomainError when w detectably leaves the plane
  /// (projection residual > 1e-9 |w|). Maps everything to zero in the
  /// proportional case.
  Vec rotate(const Vec& w) const;

  /// C * R(P y); equals (y.x) v - (y.v) x.
  Vec flow_direction(const Vec& y) const;

 private:
  Vec x_, v_;
  bool proportional_ = false;
  Vec a1_, a2_;
  double c_ = 0.0;
  Vec w_star_;
  Vec v1_, v2_;
  Vec y1_, y2_;
  double triangle_cond_ = 1.0;
};

}  // namespace sxr
