#pragma once

// Scalar expressions in the two surface parameters s and t.
//
// Grammar (lowest to highest precedence):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          (right associative)
//   primary := number | 's' | 't' | 'pi' | func '(' sum ')' | '(' sum ')'
//   func    := sin cos tan exp ln sqrt abs neg
//
// Expressions are immutable and share subtrees, so copies are cheap and
// concurrent evaluation is safe.

#include "errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace gpencil {

enum class Var : std::uint8_t { s, t };

enum class Op : std::uint8_t {
  constant,
  pi,
  var_s,
  var_t,
  neg,
  add,
  sub,
  mul,
  div,
  pow,
  sin,
  cos,
  tan,
  exp,
  ln,
  sqrt,
  abs,
};

namespace detail {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  double value = 0.0;
  NodePtr lhs;
  NodePtr rhs;
};

inline bool is_unary_function(Op op) {
  switch (op) {
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::tan:
    case Op::exp:
    case Op::ln:
    case Op::sqrt:
    case Op::abs:
      return true;
    default:
      return false;
  }
}

inline bool is_binary(Op op) {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div || op == Op::pow;
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::neg: return "neg";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::tan: return "tan";
    case Op::exp: return "exp";
    case Op::ln: return "ln";
    case Op::sqrt: return "sqrt";
    case Op::abs: return "abs";
    default: return "";
  }
}

inline char operator_symbol(Op op) {
  switch (op) {
    case Op::add: return '+';
    case Op::sub: return '-';
    case Op::mul: return '*';
    case Op::div: return '/';
    case Op::pow: return '^';
    default: return '?';
  }
}

[[noreturn]] inline void domain_fail(const char* what) { throw Error(ErrorKind::domain, what); }

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) domain_fail(what);
  return v;
}

inline double apply_unary(Op op, double x) {
  switch (op) {
    case Op::neg: return -x;
    case Op::sin: return checked(std::sin(x), "sin of non-finite value");
    case Op::cos: return checked(std::cos(x), "cos of non-finite value");
    case Op::tan: return checked(std::tan(x), "tan overflow");
    case Op::exp: return checked(std::exp(x), "exp overflow");
    case Op::ln:
      if (!(x > 0.0)) domain_fail("ln of non-positive value");
      return std::log(x);
    case Op::sqrt:
      if (x < 0.0) domain_fail("sqrt of negative value");
      return std::sqrt(x);
    case Op::abs: return std::fabs(x);
    default: domain_fail("bad unary node");
  }
}

inline double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::add: return checked(a + b, "overflow in +");
    case Op::sub: return checked(a - b, "overflow in -");
    case Op::mul: return checked(a * b, "overflow in *");
    case Op::div:
      if (b == 0.0) domain_fail("division by zero");
      return checked(a / b, "overflow in /");
    case Op::pow: return checked(std::pow(a, b), "invalid power");
    default: domain_fail("bad binary node");
  }
}

inline double eval_node(const Node& n, double s, double t) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::pi: return std::numbers::pi;
    case Op::var_s: return s;
    case Op::var_t: return t;
    default: break;
  }
  if (is_binary(n.op)) return apply_binary(n.op, eval_node(*n.lhs, s, t), eval_node(*n.rhs, s, t));
  return apply_unary(n.op, eval_node(*n.lhs, s, t));
}

inline bool depends(const Node& n, Op var) {
  if (n.op == var) return true;
  if (n.lhs && depends(*n.lhs, var)) return true;
  return n.rhs && depends(*n.rhs, var);
}

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void print_node(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::constant:
      if (std::signbit(n.value)) {
        out += "(-";
        out += format_number(-n.value);
        out += ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case Op::pi: out += "pi"; return;
    case Op::var_s: out += 's'; return;
    case Op::var_t: out += 't'; return;
    case Op::neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    default: break;
  }
  if (is_binary(n.op)) {
    out += '(';
    print_node(*n.lhs, out);
    out += ' ';
    out += operator_symbol(n.op);
    out += ' ';
    print_node(*n.rhs, out);
    out += ')';
    return;
  }
  out += function_name(n.op);
  out += '(';
  print_node(*n.lhs, out);
  out += ')';
}

}  // namespace detail

class Expression {
 public:
  Expression() : Expression(0.0) {}
  explicit Expression(double c) : root_(leaf(Op::constant, c)) {}

  static Expression constant(double c) { return Expression(c); }
  static Expression pi() { return Expression(leaf(Op::pi, 0.0)); }
  static Expression variable(Var v) { return Expression(leaf(v == Var::s ? Op::var_s : Op::var_t, 0.0)); }

  // Builds a node, folding it to a constant when every operand is constant
  // and the result is a valid real. Invalid constant subtrees are kept so the
  // domain error surfaces at evaluation time.
  static Expression unary(Op op, const Expression& arg) {
    Expression e(std::make_shared<const detail::Node>(detail::Node{op, 0.0, arg.root_, nullptr}));
    return e.folded();
  }
  static Expression binary(Op op, const Expression& lhs, const Expression& rhs) {
    Expression e(std::make_shared<const detail::Node>(detail::Node{op, 0.0, lhs.root_, rhs.root_}));
    return e.folded();
  }

  double operator()(double s, double t) const { return detail::eval_node(*root_, s, t); }

  bool depends_on(Var v) const { return detail::depends(*root_, v == Var::s ? Op::var_s : Op::var_t); }

  std::optional<double> constant_value() const {
    if (root_->op == Op::constant) return root_->value;
    return std::nullopt;
  }

  bool is_zero() const { return root_->op == Op::constant && root_->value == 0.0; }
  bool is_one() const { return root_->op == Op::constant && root_->value == 1.0; }

  Op op() const { return root_->op; }
  Expression lhs() const { return Expression(root_->lhs); }
  Expression rhs() const { return Expression(root_->rhs); }

  std::string to_string() const {
    std::string out;
    detail::print_node(*root_, out);
    return out;
  }

 private:
  explicit Expression(detail::NodePtr root) : root_(std::move(root)) {}

  static detail::NodePtr leaf(Op op, double v) {
    return std::make_shared<const detail::Node>(detail::Node{op, v, nullptr, nullptr});
  }

  Expression folded() const {
    const auto& n = *root_;
    const bool lhs_const = n.lhs && n.lhs->op == Op::constant;
    const bool rhs_const = !n.rhs || n.rhs->op == Op::constant;
    if (!lhs_const || !rhs_const) return *this;
    try {
      return Expression((*this)(0.0, 0.0));
    } catch (const Error&) {
      return *this;
    }
  }

  detail::NodePtr root_;
};

inline double eval(const Expression& e, double s, double t) { return e(s, t); }

inline Expression operator+(const Expression& a, const Expression& b) { return Expression::binary(Op::add, a, b); }
inline Expression operator-(const Expression& a, const Expression& b) { return Expression::binary(Op::sub, a, b); }
inline Expression operator*(const Expression& a, const Expression& b) { return Expression::binary(Op::mul, a, b); }
inline Expression operator/(const Expression& a, const Expression& b) { return Expression::binary(Op::div, a, b); }
inline Expression operator-(const Expression& a) { return Expression::unary(Op::neg, a); }
inline Expression pow(const Expression& a, const Expression& b) { return Expression::binary(Op::pow, a, b); }
inline Expression sin(const Expression& a) { return Expression::unary(Op::sin, a); }
inline Expression cos(const Expression& a) { return Expression::unary(Op::cos, a); }

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression parse() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError(ErrorKind::syntax, pos_, "empty expression");
    Expression e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(ErrorKind::syntax, pos_, what); }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expression parse_sum() {
    Expression lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = Expression::binary(Op::add, lhs, parse_product());
      else if (accept('-'))
        lhs = Expression::binary(Op::sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  Expression parse_product() {
    Expression lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = Expression::binary(Op::mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = Expression::binary(Op::div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expression parse_unary() {
    if (accept('-')) return Expression::unary(Op::neg, parse_unary());
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (accept('^')) return Expression::binary(Op::pow, base, parse_unary());
    return base;
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

  Expression parse_primary() {
    skip_ws();
    if (pos_ == src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (is_digit(c) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expression e = parse_sum();
      expect(')');
      return e;
    }
    if (is_alpha(c)) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        while (p < src_.size() && is_digit(src_[p])) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw SyntaxError(ErrorKind::syntax, start, "malformed number");
    return Expression(v);
  }

  Expression parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "s") return Expression::variable(Var::s);
    if (name == "t") return Expression::variable(Var::t);
    if (name == "pi") return Expression::pi();

    static constexpr Op functions[] = {Op::sin, Op::cos, Op::tan, Op::exp, Op::ln, Op::sqrt, Op::abs, Op::neg};
    for (Op f : functions) {
      if (name == function_name(f)) {
        skip_ws();
        if (pos_ == src_.size() || src_[pos_] != '(') fail("function '" + std::string(name) + "' requires '('");
        ++pos_;
        Expression arg = parse_sum();
        expect(')');
        return Expression::unary(f, arg);
      }
    }
    throw SyntaxError(ErrorKind::unknown_identifier, start, "'" + std::string(name) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Constructors with the algebraic identities used while differentiating.
inline Expression d_add(const Expression& a, const Expression& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return a + b;
}

inline Expression d_sub(const Expression& a, const Expression& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return a - b;
}

inline Expression d_mul(const Expression& a, const Expression& b) {
  if (a.is_zero() || b.is_zero()) return Expression(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return a * b;
}

inline Expression d_div(const Expression& a, const Expression& b) {
  if (a.is_zero()) return Expression(0.0);
  if (b.is_one()) return a;
  return a / b;
}

inline Expression d_neg(const Expression& a) {
  if (a.is_zero()) return a;
  return -a;
}

inline Expression derive(const Expression& e, Var v) {
  if (!e.depends_on(v)) return Expression(0.0);
  switch (e.op()) {
    case Op::var_s:
    case Op::var_t:
      return Expression(1.0);
    case Op::neg:
      return d_neg(derive(e.lhs(), v));
    case Op::add:
      return d_add(derive(e.lhs(), v), derive(e.rhs(), v));
    case Op::sub:
      return d_sub(derive(e.lhs(), v), derive(e.rhs(), v));
    case Op::mul: {
      const Expression u = e.lhs(), w = e.rhs();
      return d_add(d_mul(derive(u, v), w), d_mul(u, derive(w, v)));
    }
    case Op::div: {
      const Expression u = e.lhs(), w = e.rhs();
      const Expression num = d_sub(d_mul(derive(u, v), w), d_mul(u, derive(w, v)));
      return d_div(num, pow(w, Expression(2.0)));
    }
    case Op::pow: {
      const Expression u = e.lhs(), w = e.rhs();
      if (!w.depends_on(Var::s) && !w.depends_on(Var::t)) {
        // c * u^(c-1) * u'
        return d_mul(d_mul(w, pow(u, w - Expression(1.0))), derive(u, v));
      }
      // u^w * (w' ln u + w u'/u)
      const Expression term = d_add(d_mul(derive(w, v), Expression::unary(Op::ln, u)),
                                    d_div(d_mul(w, derive(u, v)), u));
      return d_mul(e, term);
    }
    case Op::sin:
      return d_mul(cos(e.lhs()), derive(e.lhs(), v));
    case Op::cos:
      return d_neg(d_mul(sin(e.lhs()), derive(e.lhs(), v)));
    case Op::tan:
      return d_div(derive(e.lhs(), v), pow(cos(e.lhs()), Expression(2.0)));
    case Op::exp:
      return d_mul(e, derive(e.lhs(), v));
    case Op::ln:
      return d_div(derive(e.lhs(), v), e.lhs());
    case Op::sqrt:
      return d_div(derive(e.lhs(), v), Expression(2.0) * e);
    case Op::abs:
      throw Error(ErrorKind::non_differentiable, "abs(" + e.lhs().to_string() + ")");
    case Op::constant:
    case Op::pi:
      break;
  }
  return Expression(0.0);
}

}  // namespace detail

inline Expression parse(std::string_view source) { return detail::Parser(source).parse(); }

inline Expression differentiate(const Expression& e, Var v) { return detail::derive(e, v); }

inline Expression differentiate(const Expression& e, Var v, int order) {
  Expression d = e;
  for (int i = 0; i < order; ++i) d = differentiate(d, v);
  return d;
}

// Parses and evaluates an expression that must not reference s or t.
inline double evaluate_constant(std::string_view source) {
  const Expression e = parse(source);
  if (e.depends_on(Var::s) || e.depends_on(Var::t))
    throw Error(ErrorKind::invalid_argument, "expected a constant expression, got '" + std::string(source) + "'");
  return e(0.0, 0.0);
}

}  // namespace gpencil
