#pragma once

#include "sxr/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sxr {

/// Raised by the expression parser; carries the character position of the
/// offending token.
struct ParseError : std::invalid_argument {
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

/// Arithmetic expression over variables, +, -, *, /, ^ (right associative),
/// unary minus, and exp/log/sqrt. Used for per-component field definitions
/// and for user-supplied improvement directions.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' factor)?
///   base   := number | var | func '(' expr ')' | '(' expr ')' | '-' base
class Expr {
 public:
  enum class Kind { constant, variable, add, sub, mul, div, pow, neg, exp, log, sqrt };

  Kind kind() const { return kind_; }
  double constant_value() const { return value_; }
  int variable_slot() const { return slot_; }
  const std::string& variable_name() const { return name_; }
  const Expr& lhs() const { return *children_[0]; }
  const Expr& rhs() const { return *children_[1]; }

  /// Evaluate with `vars[slot]` supplying each variable's value.
  /// Throws FieldRangeError on log of a nonpositive number, division by
  /// zero, or a non-finite result.
  double eval(const Vec& vars) const;

  /// Emit a parenthesized form that re-parses to an equivalent tree.
  std::string print() const;

  static std::shared_ptr<const Expr> constant(double v);
  static std::shared_ptr<const Expr> variable(int slot, std::string name);
  static std::shared_ptr<const Expr> unary(Kind k, std::shared_ptr<const Expr> a);
  static std::shared_ptr<const Expr> binary(Kind k, std::shared_ptr<const Expr> a,
                                            std::shared_ptr<const Expr> b);

 private:
  Kind kind_ = Kind::constant;
  double value_ = 0.0;
  int slot_ = -1;
  std::string name_;
  std::shared_ptr<const Expr> children_[2];
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Declares the variables an expression may reference and maps each name
/// to an evaluation slot. Field components see x1..xn; improvement
/// directions additionally see g1..gn, p1..pn, and m.
class SymbolTable {
 public:
  static SymbolTable bundle_vars(int n);
  static SymbolTable direction_vars(int n);

  /// Slot for `name`, or -1 if the name is not declared.
  int lookup(const std::string& name) const;
  int slot_count() const { return slot_count_; }
  int dimension() const { return n_; }

 private:
  int n_ = 0;
  int slot_count_ = 0;
  bool with_direction_symbols_ = false;
};

/// Recursive-descent parse of `text` against `symbols`.
/// Throws ParseError with position on malformed input or an undeclared
/// variable (e.g. x5 in a 3-good field).
ExprPtr parse_expr(const std::string& text, const SymbolTable& symbols);

/// Convenience: parse a field component over x1..xn.
ExprPtr parse_field_expr(const std::string& text, int n);

}  // namespace sxr
