#include "sxr/field.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace sxr {

using nlohmann::json;

Field Field::cobb_douglas(Vec alpha) {
  if (alpha.size() < 2 || !strictly_positive(alpha))
    throw DomainError("cobb_douglas needs n >= 2 strictly positive weights");
  Field f;
  f.n_ = alpha.size();
  f.name_ = "cobb_douglas";
  f.eval_ = [alpha](const Vec& x) { return (alpha.array() / x.array()).matrix(); };
  f.analytic_jac_ = [alpha](const Vec& x) {
    Mat j = Mat::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) j(i, i) = -alpha[i] / (x[i] * x[i]);
    return j;
  };
  return f;
}

Field Field::identity(Eigen::Index n) {
  if (n < 2) throw DomainError("identity field needs n >= 2");
  Field f;
  f.n_ = n;
  f.name_ = "identity";
  f.eval_ = [](const Vec& x) { return x; };
  f.analytic_jac_ = [](const Vec& x) { return Mat::Identity(x.size(), x.size()); };
  return f;
}

Field Field::ces(Vec alpha, double rho) {
  if (alpha.size() < 2 || !strictly_positive(alpha))
    throw DomainError("ces needs n >= 2 strictly positive weights");
  Field f;
  f.n_ = alpha.size();
  f.name_ = "ces";
  f.eval_ = [alpha, rho](const Vec& x) {
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = alpha[i] * std::pow(x[i], rho - 1.0);
    return g;
  };
  f.analytic_jac_ = [alpha, rho](const Vec& x) {
    Mat j = Mat::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      j(i, i) = alpha[i] * (rho - 1.0) * std::pow(x[i], rho - 2.0);
    return j;
  };
  return f;
}

Field Field::nonintegrable3() {
  Field f;
  f.n_ = 3;
  f.name_ = "noninteg3";
  f.eval_ = [](const Vec& x) {
    Vec g(3);
    g << x[1], 1.0, 1.0;
    return g;
  };
  f.analytic_jac_ = [](const Vec&) {
    Mat j = Mat::Zero(3, 3);
    j(0, 1) = 1.0;
    return j;
  };
  return f;
}

Field Field::from_expressions(Eigen::Index n, const std::vector<std::string>& components) {
  if (static_cast<Eigen::Index>(components.size()) != n)
    throw DomainError("expected " + std::to_string(n) + " component expressions, got " +
                      std::to_string(components.size()));
  Field f;
  f.n_ = n;
  f.name_ = "expr";
  for (const auto& text : components)
    f.components_.push_back(parse_field_expr(text, static_cast<int>(n)));
  auto exprs = f.components_;
  f.eval_ = [exprs](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < exprs.size(); ++i) g[static_cast<Eigen::Index>(i)] = exprs[i]->eval(x);
    return g;
  };
  return f;
}

Field Field::rescaled(std::function<double(const Vec&)> scale, std::string label) const {
  Field f;
  f.n_ = n_;
  f.name_ = name_ + "*" + label;
  auto base = eval_;
  f.eval_ = [base, scale](const Vec& x) {
    double c = scale(x);
    if (!(c > 0.0)) throw FieldRangeError("rescaling factor must be strictly positive");
    return Vec(c * base(x));
  };
  // No analytic derivative for the composite; finite differences take over.
  return f;
}

Field Field::from_json_text(const std::string& text) {
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("field spec is not valid JSON: ") + e.what());
  }
  if (!spec.contains("n") || !spec["n"].is_number_integer())
    throw DomainError("field spec needs an integer \"n\"");
  auto n = spec["n"].get<Eigen::Index>();
  std::string kind = spec.value("kind", "builtin");

  Field f = [&]() -> Field {
    if (kind == "expr") {
      if (!spec.contains("components"))
        throw DomainError("expression field spec needs \"components\"");
      std::vector<std::string> comps = spec["components"].get<std::vector<std::string>>();
      return from_expressions(n, comps);
    }
    if (kind != "builtin") throw DomainError("unknown field kind \"" + kind + "\"");
    std::string family = spec.value("family", "");
    std::vector<double> params = spec.value("params", std::vector<double>{});
    auto param_vec = [&](std::size_t count) {
      if (params.size() != count)
        throw DomainError("family \"" + family + "\" with n=" + std::to_string(n) + " expects " +
                          std::to_string(count) + " params, got " + std::to_string(params.size()));
      return Eigen::Map<const Vec>(params.data(), static_cast<Eigen::Index>(count));
    };
    if (family == "cobb_douglas") return cobb_douglas(param_vec(static_cast<std::size_t>(n)));
    if (family == "identity") return identity(n);
    if (family == "ces") {
      if (params.size() != static_cast<std::size_t>(n) + 1)
        throw DomainError("ces expects n weights followed by rho");
      Vec alpha = Eigen::Map<const Vec>(params.data(), n);
      return ces(alpha, params.back());
    }
    if (family == "noninteg3") {
      if (n != 3) throw DomainError("noninteg3 is defined for n = 3");
      return nonintegrable3();
    }
    throw DomainError("unknown builtin family \"" + family + "\"");
  }();

  if (spec.value("jacobian", "analytic") == "fd") f.use_finite_difference_jacobian();
  return f;
}

Field Field::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open field spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void Field::check_point(const Vec& x) const {
  if (x.size() != n_)
    throw DomainError("field has dimension " + std::to_string(n_) + ", point has " +
                      std::to_string(x.size()));
  if (!strictly_positive(x))
    throw DomainError("field evaluation outside the positive orthant");
}

Vec Field::raw_value(const Vec& x) const { return eval_(x); }

Vec Field::value(const Vec& x) const {
  check_point(x);
  Vec g = eval_(x);
  double max_coeff = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw FieldRangeError("field value is not finite");
    if (g[i] < 0.0) {
      if (g[i] < -1e-12)
        throw FieldRangeError("field component " + std::to_string(i + 1) +
                              " is negative: " + std::to_string(g[i]));
      g[i] = 0.0;  // absorb roundoff
    }
    max_coeff = std::max(max_coeff, g[i]);
  }
  if (max_coeff == 0.0) throw FieldRangeError("field value is the zero vector");
  return g;
}

JacobianEstimate Field::jacobian(const Vec& x) const {
  check_point(x);
  if (analytic_jac_ && !force_fd_) return JacobianEstimate{analytic_jac_(x), false, 0.0};

  Mat j(n_, n_);
  double base_step = 0.0;
  for (Eigen::Index c = 0; c < n_; ++c) {
    double h = fd_step(x[c]);
    base_step = std::max(base_step, h);
    Vec xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    if (!strictly_positive(xm))
      throw DomainError("finite-difference stencil leaves the positive orthant");
    j.col(c) = (raw_value(xp) - raw_value(xm)) / (2.0 * h);
  }
  return JacobianEstimate{std::move(j), true, base_step};
}

}  // namespace sxr
