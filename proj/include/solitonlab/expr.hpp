#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solitonlab/jet.hpp"

namespace solitonlab {

enum class UnaryOp { Neg, Sin, Cos, Exp, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over named chart coordinates.  Variables
/// are stored by index into the declaration list; exponents of '^' are
/// integer constants in [-6, 6].
struct Expr {
  enum class Kind { Constant, Variable, Unary, Binary, Power };

  Kind kind;
  double constant = 0.0;
  int var = -1;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  int exponent = 1;
  ExprPtr lhs, rhs;
};

namespace ex {
ExprPtr c(double value);
ExprPtr var(int index);
ExprPtr unary(UnaryOp op, ExprPtr e);
ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b);
ExprPtr power(ExprPtr base, int exponent);
inline ExprPtr add(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Add, a, b); }
inline ExprPtr sub(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Sub, a, b); }
inline ExprPtr mul(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Mul, a, b); }
inline ExprPtr div(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Div, a, b); }
inline ExprPtr neg(ExprPtr e) { return unary(UnaryOp::Neg, e); }
inline ExprPtr sin(ExprPtr e) { return unary(UnaryOp::Sin, e); }
inline ExprPtr cos(ExprPtr e) { return unary(UnaryOp::Cos, e); }
}  // namespace ex

struct ExprError {
  enum class Kind { Lex, Parse, UnboundVariable, Domain };
  Kind kind;
  size_t begin = 0, end = 0;  // byte span in the source text
  std::string message;
};

struct ParseResult {
  ExprPtr expr;                    // null on error
  std::optional<ExprError> error;
  bool ok() const { return expr != nullptr; }
};

/// Parses an expression over the declared coordinate names.  Total:
/// any input yields either a tree or a single located error.
ParseResult parse_expr(const std::string& source,
                       const std::vector<std::string>& declared_vars);

/// Renders a tree back to parseable text (fully parenthesized).
std::string unparse(const Expr& e);

/// Raised by evaluation on domain violations; carries the point.
struct ExprDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Jet3 eval_jet(const Expr& e, const CoordPoint& p);
double eval_value(const Expr& e, const CoordPoint& p);

/// Rebuilds a tree with every variable index shifted by `offset`.
ExprPtr shift_vars(const ExprPtr& e, int offset);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace solitonlab
