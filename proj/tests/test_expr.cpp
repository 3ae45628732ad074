#include "sxr/expr.hpp"
#include "sxr/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace sxr;

namespace {
double eval_at(const std::string& text, int n, std::initializer_list<double> pt) {
  Vec x(static_cast<Eigen::Index>(pt.size()));
  Eigen::Index i = 0;
  for (double v : pt) x[i++] = v;
  return parse_field_expr(text, n)->eval(x);
}
}  // namespace

TEST_CASE("parses a quotient of constant and variable") {
  auto e = parse_field_expr("0.5/x1", 2);
  CHECK(e->kind() == Expr::Kind::div);
  Vec x(2);
  x << 4.0, 1.0;
  CHECK(e->eval(x) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("parses a bare variable") {
  auto e = parse_field_expr("x2", 3);
  CHECK(e->kind() == Expr::Kind::variable);
  Vec x(3);
  x << 1.0, 3.0, 7.0;
  CHECK(e->eval(x) == doctest::Approx(3.0));
}

TEST_CASE("power and unary minus inside a function call") {
  // 2^2 + exp(-0.5) = 4.606530659712633
  CHECK(eval_at("x1^2 + exp(-x2)", 2, {2.0, 0.5}) ==
        doctest::Approx(4.606530659712633).epsilon(1e-14));
}

TEST_CASE("operator precedence and right-associative power") {
  CHECK(eval_at("2+3*4", 2, {1.0, 1.0}) == doctest::Approx(14.0));
  CHECK(eval_at("2*3^2", 2, {1.0, 1.0}) == doctest::Approx(18.0));
  CHECK(eval_at("2^3^2", 2, {1.0, 1.0}) == doctest::Approx(512.0));  // 2^(3^2)
  CHECK(eval_at("(2^3)^2", 2, {1.0, 1.0}) == doctest::Approx(64.0));
}

TEST_CASE("functions evaluate") {
  CHECK(eval_at("log(x1)", 2, {std::exp(1.0), 1.0}) == doctest::Approx(1.0));
  CHECK(eval_at("sqrt(x1*x2)", 2, {2.0, 8.0}) == doctest::Approx(4.0));
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(parse_field_expr("", 2), ParseError);
  CHECK_THROWS_AS(parse_field_expr("0.5//x1", 2), ParseError);
  CHECK_THROWS_AS(parse_field_expr("(x1", 2), ParseError);
  CHECK_THROWS_AS(parse_field_expr("x1 +", 2), ParseError);
  CHECK_THROWS_AS(parse_field_expr("foo(x1)", 2), ParseError);
  try {
    parse_field_expr("x1 + @", 2);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position == 5);
  }
}

TEST_CASE("variable index out of range is rejected") {
  CHECK_THROWS_AS(parse_field_expr("x5", 2), ParseError);
  CHECK_THROWS_AS(parse_field_expr("x0", 2), ParseError);
  CHECK_NOTHROW(parse_field_expr("x2", 2));
}

TEST_CASE("evaluation guards against bad arithmetic") {
  CHECK_THROWS_AS(eval_at("1/(x1 - x1)", 2, {1.0, 1.0}), FieldRangeError);
  CHECK_THROWS_AS(eval_at("log(x1 - x2)", 2, {1.0, 2.0}), FieldRangeError);
  CHECK_THROWS_AS(eval_at("sqrt(x1 - x2)", 2, {1.0, 2.0}), FieldRangeError);
}

TEST_CASE("print round-trips through the parser") {
  const char* cases[] = {
      "0.5/x1",
      "x1^2 + exp(-x2)",
      "x1*x2 - x2/x1 + 3.5",
      "sqrt(x1) * log(x2 + 1) - 2^x1",
      "-x1 - -x2",
      "(x1 + x2)^(x1/4)",
      "1e-3*x1 + 2.5e2",
  };
  Rng rng(7);
  for (const char* text : cases) {
    auto original = parse_field_expr(text, 2);
    auto reparsed = parse_field_expr(original->print(), 2);
    for (int trial = 0; trial < 50; ++trial) {
      Vec x(2);
      x << rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0);
      CHECK(std::abs(original->eval(x) - reparsed->eval(x)) <= 1e-12);
    }
  }
}

TEST_CASE("direction symbol table exposes field, prices, and income") {
  SymbolTable t = SymbolTable::direction_vars(2);
  auto e = parse_expr("g1*x2 - p1*m", t);
  Vec vars(7);  // x1 x2 g1 g2 p1 p2 m
  vars << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0;
  CHECK(e->eval(vars) == doctest::Approx(3.0 * 2.0 - 5.0 * 7.0));
  // Field tables must not see direction symbols.
  CHECK_THROWS_AS(parse_field_expr("g1", 2), ParseError);
  CHECK_THROWS_AS(parse_field_expr("m", 2), ParseError);
}
