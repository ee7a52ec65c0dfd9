#include "velpert/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <system_error>

#include "velpert/errors.hpp"

namespace velpert {

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  BinaryOp op = BinaryOp::add;
  Function fn = Function::sin;
  Expr lhs{nullptr};
  Expr rhs{nullptr};
  bool has_x = false;
};

namespace {

const Expr& null_expr() {
  static const Expr e = Expr::constant(0.0);
  return e;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

bool is_literal(const Expr& e) { return e.kind() == Expr::Kind::constant; }

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string("non-finite result in ") + what);
  }
  return v;
}

double apply_binary(BinaryOp op, double l, double r) {
  switch (op) {
    case BinaryOp::add:
      return checked(l + r, "addition");
    case BinaryOp::sub:
      return checked(l - r, "subtraction");
    case BinaryOp::mul:
      return checked(l * r, "multiplication");
    case BinaryOp::div:
      if (r == 0.0) throw DomainError("division by zero");
      return checked(l / r, "division");
    case BinaryOp::pow:
      if (l < 0.0 && std::trunc(r) != r) {
        throw DomainError("negative base raised to a non-integer power");
      }
      if (l == 0.0 && r < 0.0) throw DomainError("zero raised to a negative power");
      return checked(std::pow(l, r), "power");
  }
  return 0.0;
}

double apply_function(Function fn, double a) {
  switch (fn) {
    case Function::sin:
      return std::sin(a);
    case Function::cos:
      return std::cos(a);
    case Function::tan:
      return checked(std::tan(a), "tan");
    case Function::exp:
      return checked(std::exp(a), "exp");
    case Function::log:
      if (a <= 0.0) throw DomainError("log of a non-positive argument");
      return std::log(a);
    case Function::sqrt:
      if (a < 0.0) throw DomainError("sqrt of a negative argument");
      return std::sqrt(a);
  }
  return 0.0;
}

// Recursive-descent parser; positions reported 1-based.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(BinaryOp::pow, base, parse_exponent());
    return base;
  }

  Expr parse_exponent() {
    if (accept('-')) return Expr::negate(parse_exponent());
    return parse_power();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected operand");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("numeric literal out of range");
    }
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable();
    if (name == "pi") return Expr::pi();
    static constexpr std::array functions{Function::sin, Function::cos,  Function::tan,
                                          Function::exp, Function::log, Function::sqrt};
    for (Function fn : functions) {
      if (name == function_name(fn)) {
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        Expr arg = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return Expr::call(fn, arg);
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::pi;
  n->value = std::numbers::pi;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->has_x = true;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  if (is_literal(operand)) return constant(-operand.value());
  if (operand.kind() == Kind::negate) return operand.lhs();
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->has_x = operand.depends_on_x();
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  if (is_literal(lhs) && is_literal(rhs)) {
    try {
      return constant(apply_binary(op, lhs.value(), rhs.value()));
    } catch (const DomainError&) {
      // Left unfolded; evaluation reports the error.
    }
  }
  switch (op) {
    case BinaryOp::add:
      if (lhs.is_constant(0.0)) return rhs;
      if (rhs.is_constant(0.0)) return lhs;
      break;
    case BinaryOp::sub:
      if (rhs.is_constant(0.0)) return lhs;
      if (lhs.is_constant(0.0)) return negate(std::move(rhs));
      break;
    case BinaryOp::mul:
      if (lhs.is_constant(0.0) || rhs.is_constant(0.0)) return constant(0.0);
      if (lhs.is_constant(1.0)) return rhs;
      if (rhs.is_constant(1.0)) return lhs;
      break;
    case BinaryOp::div:
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(0.0) && is_literal(rhs)) return constant(0.0);
      break;
    case BinaryOp::pow:
      if (rhs.is_constant(1.0)) return lhs;
      if (rhs.is_constant(0.0)) return constant(1.0);
      break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->op = op;
  n->has_x = lhs.depends_on_x() || rhs.depends_on_x();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::call(Function fn, Expr arg) {
  if (is_literal(arg)) {
    try {
      return constant(apply_function(fn, arg.value()));
    } catch (const DomainError&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::call;
  n->fn = fn;
  n->has_x = arg.depends_on_x();
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
BinaryOp Expr::op() const noexcept { return node_->op; }
Function Expr::function() const noexcept { return node_->fn; }
const Expr& Expr::lhs() const noexcept { return node_->lhs.node_ ? node_->lhs : null_expr(); }
const Expr& Expr::rhs() const noexcept { return node_->rhs.node_ ? node_->rhs : null_expr(); }

bool Expr::is_constant(double v) const noexcept {
  return node_->kind == Kind::constant && node_->value == v;
}

bool Expr::depends_on_x() const noexcept { return node_->has_x; }

double Expr::eval(double x) const {
  switch (node_->kind) {
    case Kind::constant:
    case Kind::pi:
      return node_->value;
    case Kind::variable:
      return x;
    case Kind::negate:
      return -node_->lhs.eval(x);
    case Kind::binary:
      return apply_binary(node_->op, node_->lhs.eval(x), node_->rhs.eval(x));
    case Kind::call:
      return apply_function(node_->fn, node_->lhs.eval(x));
  }
  return 0.0;
}

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

Expr differentiate(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant:
    case K::pi:
      return Expr::constant(0.0);
    case K::variable:
      return Expr::constant(1.0);
    case K::negate:
      return -differentiate(e.lhs());
    case K::binary: {
      const Expr& f = e.lhs();
      const Expr& g = e.rhs();
      switch (e.op()) {
        case BinaryOp::add:
          return differentiate(f) + differentiate(g);
        case BinaryOp::sub:
          return differentiate(f) - differentiate(g);
        case BinaryOp::mul:
          return differentiate(f) * g + f * differentiate(g);
        case BinaryOp::div:
          return (differentiate(f) * g - f * differentiate(g)) /
                 Expr::binary(BinaryOp::pow, g, Expr::constant(2.0));
        case BinaryOp::pow:
          if (!g.depends_on_x()) {
            return g * Expr::binary(BinaryOp::pow, f, g - Expr::constant(1.0)) * differentiate(f);
          }
          if (!f.depends_on_x()) {
            return e * Expr::call(Function::log, f) * differentiate(g);
          }
          // d(f^g) = f^g (g' log f + g f'/f)
          return e * (differentiate(g) * Expr::call(Function::log, f) + g * differentiate(f) / f);
      }
      break;
    }
    case K::call: {
      const Expr& a = e.lhs();
      const Expr da = differentiate(a);
      switch (e.function()) {
        case Function::sin:
          return Expr::call(Function::cos, a) * da;
        case Function::cos:
          return -Expr::call(Function::sin, a) * da;
        case Function::tan:
          return da / Expr::binary(BinaryOp::pow, Expr::call(Function::cos, a), Expr::constant(2.0));
        case Function::exp:
          return e * da;
        case Function::log:
          return da / a;
        case Function::sqrt:
          return da / (Expr::constant(2.0) * e);
      }
      break;
    }
  }
  return Expr::constant(0.0);
}

std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: {
      const std::string s = format_double(e.value());
      return e.value() < 0.0 || std::signbit(e.value()) ? "(" + s + ")" : s;
    }
    case K::pi:
      return "pi";
    case K::variable:
      return "x";
    case K::negate:
      return "(-" + to_string(e.lhs()) + ")";
    case K::binary: {
      static constexpr std::array symbols{'+', '-', '*', '/', '^'};
      return "(" + to_string(e.lhs()) + " " + symbols[static_cast<int>(e.op())] + " " +
             to_string(e.rhs()) + ")";
    }
    case K::call:
      return std::string(function_name(e.function())) + "(" + to_string(e.lhs()) + ")";
  }
  return {};
}

std::string_view function_name(Function fn) noexcept {
  switch (fn) {
    case Function::sin:
      return "sin";
    case Function::cos:
      return "cos";
    case Function::tan:
      return "tan";
    case Function::exp:
      return "exp";
    case Function::log:
      return "log";
    case Function::sqrt:
      return "sqrt";
  }
  return "?";
}

}  // namespace velpert
