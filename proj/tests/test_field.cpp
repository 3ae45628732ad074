#include "sxr/field.hpp"
#include "sxr/rng.hpp"

#include <doctest.h>

using namespace sxr;

namespace {
Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}
}  // namespace

TEST_CASE("builtin values match hand arithmetic") {
  Field cobb = Field::cobb_douglas(vec2(0.5, 0.5));
  Vec g = cobb.value(vec2(4.0, 1.0));
  CHECK(g[0] == doctest::Approx(0.125));
  CHECK(g[1] == doctest::Approx(0.5));

  Field id = Field::identity(2);
  Vec gi = id.value(vec2(2.0, 1.0));
  CHECK(gi[0] == 2.0);
  CHECK(gi[1] == 1.0);

  Field n3 = Field::nonintegrable3();
  Vec gn = n3.value(vec3(1.0, 3.0, 7.0));
  CHECK(gn[0] == 3.0);
  CHECK(gn[1] == 1.0);
  CHECK(gn[2] == 1.0);

  Field c = Field::ces(vec2(1.0, 2.0), 0.5);
  Vec gc = c.value(vec2(4.0, 1.0));
  CHECK(gc[0] == doctest::Approx(0.5));  // 1 * 4^(-1/2)
  CHECK(gc[1] == doctest::Approx(2.0));
}

TEST_CASE("analytic derivative matrices") {
  Field id = Field::identity(2);
  CHECK(id.jacobian(vec2(3.0, 4.0)).matrix.isApprox(Mat::Identity(2, 2)));

  Field cobb = Field::cobb_douglas(vec2(0.5, 0.5));
  Mat j = cobb.jacobian(vec2(1.0, 1.0)).matrix;
  CHECK(j(0, 0) == doctest::Approx(-0.5));
  CHECK(j(1, 1) == doctest::Approx(-0.5));
  CHECK(j(0, 1) == 0.0);

  Mat jn = Field::nonintegrable3().jacobian(vec3(2.0, 2.0, 2.0)).matrix;
  CHECK(jn(0, 1) == 1.0);
  CHECK(jn.cwiseAbs().sum() == 1.0);  // single nonzero entry
}

TEST_CASE("finite differences track the analytic derivatives") {
  std::vector<Field> fields;
  fields.push_back(Field::cobb_douglas(vec2(0.5, 1.5)));
  fields.push_back(Field::identity(3));
  fields.push_back(Field::ces(vec3(1.0, 2.0, 0.5), 0.5));
  fields.push_back(Field::nonintegrable3());

  Rng rng(11);
  for (auto& f : fields) {
    Field fd = f;
    fd.use_finite_difference_jacobian();
    for (int trial = 0; trial < 100; ++trial) {
      Vec x(f.dimension());
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(0.5, 2.0);
      Mat ja = f.jacobian(x).matrix;
      JacobianEstimate est = fd.jacobian(x);
      CHECK(est.finite_difference);
      // Central-difference error = truncation 10 h^2 plus the
      // subtraction roundoff eps |g| / h, which dominates at h = 1e-6.
      const double h = est.step;
      const double g_max = f.value(x).cwiseAbs().maxCoeff();
      const double roundoff = 4.0 * 2.220446049250313e-16 * g_max / h;
      for (Eigen::Index r = 0; r < ja.rows(); ++r)
        for (Eigen::Index c = 0; c < ja.cols(); ++c)
          CHECK(std::abs(est.matrix(r, c) - ja(r, c)) <=
                10.0 * h * h * (1.0 + std::abs(ja(r, c))) + roundoff);
    }
  }
}

TEST_CASE("range validation") {
  // A component that goes negative must raise.
  Field f = Field::from_expressions(2, {"x1 - x2", "x2"});
  CHECK_THROWS_AS(f.value(vec2(1.0, 2.0)), FieldRangeError);
  CHECK_NOTHROW(f.value(vec2(2.0, 1.0)));

  // All-zero values are out of range.
  Field z = Field::from_expressions(2, {"x1 - x1", "x2 - x2"});
  CHECK_THROWS_AS(z.value(vec2(1.0, 1.0)), FieldRangeError);

  // Tiny negative roundoff is clamped, not fatal.
  Field tiny = Field::from_expressions(2, {"0 - 0.0000000000001", "x2"});
  Vec g = tiny.value(vec2(1.0, 1.0));
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 1.0);
}

TEST_CASE("domain validation") {
  Field cobb = Field::cobb_douglas(vec2(0.5, 0.5));
  CHECK_THROWS_AS(cobb.value(vec2(-1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(cobb.value(vec3(1.0, 1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(Bundle(vec2(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(Bundle(Vec::Constant(1, 1.0)), DomainError);
}

TEST_CASE("json field specs") {
  Field f = Field::from_json_text(
      R"({"n": 2, "kind": "builtin", "family": "cobb_douglas", "params": [0.5, 0.5]})");
  CHECK(f.value(vec2(4.0, 1.0))[0] == doctest::Approx(0.125));
  CHECK(f.has_analytic_jacobian());

  Field e = Field::from_json_text(
      R"({"n": 2, "kind": "expr", "components": ["0.5/x1", "0.5/x2"], "jacobian": "fd"})");
  CHECK(e.value(vec2(4.0, 1.0))[0] == doctest::Approx(0.125));
  CHECK_FALSE(e.has_analytic_jacobian());

  CHECK_THROWS_AS(Field::from_json_text("not json"), DomainError);
  CHECK_THROWS_AS(Field::from_json_text(R"({"kind": "builtin"})"), DomainError);
  CHECK_THROWS_AS(
      Field::from_json_text(R"({"n": 2, "kind": "builtin", "family": "nope", "params": []})"),
      DomainError);
  CHECK_THROWS_AS(
      Field::from_json_text(R"({"n": 2, "kind": "builtin", "family": "noninteg3", "params": []})"),
      DomainError);
}

TEST_CASE("fd stencil must stay inside the orthant") {
  Field e = Field::from_expressions(2, {"x1", "x2"});
  Vec x = vec2(1e-8, 1.0);  // step 1e-6 overshoots the axis
  CHECK_THROWS_AS(e.jacobian(x), DomainError);
}

TEST_CASE("rescaled fields keep ratios") {
  Field cobb = Field::cobb_douglas(vec2(0.5, 0.5));
  Field scaled = cobb.rescaled([](const Vec& x) { return 1.0 + x[0]; }, "1+x1");
  Vec x = vec2(4.0, 1.0);
  Vec g = cobb.value(x);
  Vec h = scaled.value(x);
  CHECK(h[0] / h[1] == doctest::Approx(g[0] / g[1]).epsilon(1e-14));
  CHECK(h[0] == doctest::Approx(5.0 * g[0]));
}
