#include "sxr/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace sxr {

double Expr::eval(const Vec& vars) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::variable:
      return vars[slot_];
    case Kind::add:
      return lhs().eval(vars) + rhs().eval(vars);
    case Kind::sub:
      return lhs().eval(vars) - rhs().eval(vars);
    case Kind::mul:
      return lhs().eval(vars) * rhs().eval(vars);
    case Kind::div: {
      double den = rhs().eval(vars);
      if (den == 0.0) throw FieldRangeError("division by zero in expression");
      return lhs().eval(vars) / den;
    }
    case Kind::pow: {
      double r = std::pow(lhs().eval(vars), rhs().eval(vars));
      if (!std::isfinite(r)) throw FieldRangeError("non-finite power in expression");
      return r;
    }
    case Kind::neg:
      return -lhs().eval(vars);
    case Kind::exp:
      return std::exp(lhs().eval(vars));
    case Kind::log: {
      double a = lhs().eval(vars);
      if (!(a > 0.0)) throw FieldRangeError("log of a nonpositive number in expression");
      return std::log(a);
    }
    case Kind::sqrt: {
      double a = lhs().eval(vars);
      if (a < 0.0) throw FieldRangeError("sqrt of a negative number in expression");
      return std::sqrt(a);
    }
  }
  throw std::logic_error("unreachable expression kind");
}

std::string Expr::print() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::constant:
      os << value_;
      break;
    case Kind::variable:
      os << name_;
      break;
    case Kind::add:
      os << "(" << lhs().print() << " + " << rhs().print() << ")";
      break;
    case Kind::sub:
      os << "(" << lhs().print() << " - " << rhs().print() << ")";
      break;
    case Kind::mul:
      os << "(" << lhs().print() << " * " << rhs().print() << ")";
      break;
    case Kind::div:
      os << "(" << lhs().print() << " / " << rhs().print() << ")";
      break;
    case Kind::pow:
      os << "(" << lhs().print() << " ^ " << rhs().print() << ")";
      break;
    case Kind::neg:
      os << "(-" << lhs().print() << ")";
      break;
    case Kind::exp:
      os << "exp(" << lhs().print() << ")";
      break;
    case Kind::log:
      os << "log(" << lhs().print() << ")";
      break;
    case Kind::sqrt:
      os << "sqrt(" << lhs().print() << ")";
      break;
  }
  return os.str();
}

ExprPtr Expr::constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::constant;
  e->value_ = v;
  return e;
}

ExprPtr Expr::variable(int slot, std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind_ = Kind::variable;
  e->slot_ = slot;
  e->name_ = std::move(name);
  return e;
}

ExprPtr Expr::unary(Kind k, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind_ = k;
  e->children_[0] = std::move(a);
  return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind_ = k;
  e->children_[0] = std::move(a);
  e->children_[1] = std::move(b);
  return e;
}

SymbolTable SymbolTable::bundle_vars(int n) {
  SymbolTable t;
  t.n_ = n;
  t.slot_count_ = n;
  t.with_direction_symbols_ = false;
  return t;
}

SymbolTable SymbolTable::direction_vars(int n) {
  SymbolTable t;
  t.n_ = n;
  t.slot_count_ = 3 * n + 1;  // x1..xn, g1..gn, p1..pn, m
  t.with_direction_symbols_ = true;
  return t;
}

int SymbolTable::lookup(const std::string& name) const {
  if (name.empty()) return -1;
  if (name == "m") return with_direction_symbols_ ? 3 * n_ : -1;
  char head = name[0];
  if (name.size() < 2) return -1;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
  int idx = std::stoi(name.substr(1));
  if (idx < 1 || idx > n_) return -1;
  if (head == 'x') return idx - 1;
  if (!with_direction_symbols_) return -1;
  if (head == 'g') return n_ + idx - 1;
  if (head == 'p') return 2 * n_ + idx - 1;
  return -1;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const SymbolTable& symbols)
      : text_(text), symbols_(symbols) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", 0);
    ExprPtr e = expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        e = Expr::binary(Expr::Kind::add, e, term());
      else if (accept('-'))
        e = Expr::binary(Expr::Kind::sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        e = Expr::binary(Expr::Kind::mul, e, factor());
      else if (accept('/'))
        e = Expr::binary(Expr::Kind::div, e, factor());
      else
        return e;
    }
  }

  ExprPtr factor() {
    ExprPtr b = base();
    skip_ws();
    if (accept('^')) return Expr::binary(Expr::Kind::pow, b, factor());  // right assoc
    return b;
  }

  ExprPtr base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("expected operand", pos_);
    char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return Expr::unary(Expr::Kind::neg, base());
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    // optional exponent
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' was the start of a name, not an exponent
      }
    }
    try {
      return Expr::constant(std::stod(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
  }

  ExprPtr name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string word = text_.substr(start, pos_ - start);
    if (word == "exp" || word == "log" || word == "sqrt") {
      skip_ws();
      expect('(');
      ExprPtr arg = expr();
      expect(')');
      Expr::Kind k = word == "exp"   ? Expr::Kind::exp
                     : word == "log" ? Expr::Kind::log
                                     : Expr::Kind::sqrt;
      return Expr::unary(k, arg);
    }
    int slot = symbols_.lookup(word);
    if (slot < 0)
      throw ParseError("unknown variable '" + word + "' (dimension is " +
                           std::to_string(symbols_.dimension()) + ")",
                       start);
    return Expr::variable(slot, word);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  const std::string& text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const SymbolTable& symbols) {
  return Parser(text, symbols).run();
}

ExprPtr parse_field_expr(const std::string& text, int n) {
  return parse_expr(text, SymbolTable::bundle_vars(n));
}

}  // namespace sxr
