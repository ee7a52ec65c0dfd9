#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace velpert {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, exp, log, sqrt };

/// Immutable closed-form function of a single variable `x`.
///
/// Grammar (whitespace insignificant):
///
///     expr    := term  (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' exponent)?        right associative
///     exponent:= '-' exponent | power
///     primary := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
///     func    := sin | cos | tan | exp | log | sqrt
///
/// Expr is a cheap handle to a shared, immutable tree, so copies share nodes
/// and concurrent reads are safe.
class Expr {
 public:
  enum class Kind { constant, pi, variable, negate, binary, call };

  /// Zero constant.
  Expr();

  static Expr constant(double value);
  static Expr pi();
  static Expr variable();
  // The factories below fold literal constants and drop neutral elements
  // (x+0, 1*x, x^1, ...); nothing more.
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr arg);

  Kind kind() const noexcept;
  /// Literal value; only meaningful for Kind::constant.
  double value() const noexcept;
  BinaryOp op() const noexcept;
  Function function() const noexcept;
  /// Operand of negate/call, left operand of binary.
  const Expr& lhs() const noexcept;
  const Expr& rhs() const noexcept;

  bool is_constant(double v) const noexcept;
  bool depends_on_x() const noexcept;

  /// Throws DomainError on division by zero, log/sqrt outside their domain,
  /// a negative base raised to a non-integer power, or a non-finite result.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Throws ParseError (syntax error or unknown identifier, with position).
Expr parse(std::string_view text);

/// Exact symbolic derivative with respect to x.
Expr differentiate(const Expr& e);

/// Fully parenthesized text that parses back to an equivalent expression.
/// Literals are written with the shortest round-trip representation.
std::string to_string(const Expr& e);

std::string_view function_name(Function fn) noexcept;

inline Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::div, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::negate(std::move(a)); }

}  // namespace velpert
