#pragma once

#include "sxr/expr.hpp"
#include "sxr/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sxr {

/// n x n derivative matrix of a field at a point; column j holds the
/// partials with respect to x_j.
struct JacobianEstimate {
  Mat matrix;
  bool finite_difference = false;
  double step = 0.0;  // base step for FD mode, 0 for analytic
};

/// A marginal-value field g mapping the positive orthant into
/// R^n_+ \ {0}. Immutable after construction; safe to share across
/// threads. Values are range-checked at every evaluation: tiny negative
/// components (>= -1e-12) are clamped to zero to absorb roundoff from
/// expression evaluation, anything worse raises FieldRangeError.
class Field {
 public:
  /// g_i(x) = alpha_i / x_i. Gradient of sum(alpha_i log x_i).
  static Field cobb_douglas(Vec alpha);
  /// g(x) = x.
  static Field identity(Eigen::Index n);
  /// g_i(x) = alpha_i x_i^(rho - 1). rho = 1 gives a constant field,
  /// rho = 0 coincides with cobb_douglas.
  static Field ces(Vec alpha, double rho);
  /// n = 3, g(x) = (x2, 1, 1): the stock three-good field whose
  /// derivative matrix is asymmetric everywhere.
  static Field nonintegrable3();
  /// One expression per component over x1..xn; derivatives by central
  /// finite differences.
  static Field from_expressions(Eigen::Index n, const std::vector<std::string>& components);

  /// Pointwise rescaling x -> c(x) g(x) by a positive scalar field.
  /// The exchange ratios (and everything derived from them) are unchanged.
  Field rescaled(std::function<double(const Vec&)> scale, std::string label) const;

  /// Parse the JSON config form:
  ///   {"n": int, "kind": "builtin"|"expr", "family": str, "params": [..],
  ///    "components": [str..], "jacobian": "analytic"|"fd"}
  static Field from_json_text(const std::string& text);
  static Field from_json_file(const std::string& path);

  Eigen::Index dimension() const { return n_; }
  const std::string& name() const { return name_; }
  bool has_analytic_jacobian() const { return static_cast<bool>(analytic_jac_); }

  /// Force derivative estimates through finite differences even when an
  /// analytic form exists (config "jacobian": "fd").
  void use_finite_difference_jacobian() { force_fd_ = true; }

  /// g(x). Throws DomainError on dimension mismatch or x outside the
  /// positive orthant; FieldRangeError if the value leaves R^n_+ \ {0}.
  Vec value(const Vec& x) const;

  /// Derivative matrix at x: analytic when available, otherwise central
  /// differences with per-coordinate step 1e-6 * max(1, |x_j|). The FD
  /// stencil must stay inside the positive orthant.
  JacobianEstimate jacobian(const Vec& x) const;

 private:
  Field() = default;
  void check_point(const Vec& x) const;
  Vec raw_value(const Vec& x) const;

  Eigen::Index n_ = 0;
  std::string name_;
  std::function<Vec(const Vec&)> eval_;
  std::function<Mat(const Vec&)> analytic_jac_;
  bool force_fd_ = false;
  std::vector<ExprPtr> components_;  // kept alive for expression fields
};

/// FD step used for field derivatives (also reused by the demand solver).
inline double fd_step(double coord) { return 1e-6 * std::max(1.0, std::abs(coord)); }

}  // namespace sxr
