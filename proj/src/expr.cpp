#include "solitonlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace solitonlab {

namespace ex {

namespace {
std::shared_ptr<Expr> node(Expr::Kind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}
}  // namespace

ExprPtr c(double value) {
  auto e = node(Expr::Kind::Constant);
  e->constant = value;
  return e;
}

ExprPtr var(int index) {
  auto e = node(Expr::Kind::Variable);
  e->var = index;
  return e;
}

ExprPtr unary(UnaryOp op, ExprPtr sub) {
  auto e = node(Expr::Kind::Unary);
  e->uop = op;
  e->lhs = std::move(sub);
  return e;
}

ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b) {
  auto e = node(Expr::Kind::Binary);
  e->bop = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr power(ExprPtr base, int exponent) {
  auto e = node(Expr::Kind::Power);
  e->exponent = exponent;
  e->lhs = std::move(base);
  return e;
}

}  // namespace ex

namespace {

constexpr int kMaxDepth = 200;

struct Parser {
  const std::string& src;
  const std::vector<std::string>& vars;
  size_t pos = 0;
  std::optional<ExprError> error;

  Parser(const std::string& s, const std::vector<std::string>& v)
      : src(s), vars(v) {}

  void fail(ExprError::Kind kind, size_t begin, size_t end,
            std::string message) {
    if (!error) error = ExprError{kind, begin, end, std::move(message)};
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  ExprPtr parse_expression(int depth) {
    if (depth > kMaxDepth) {
      fail(ExprError::Kind::Parse, pos, pos + 1, "expression nested too deeply");
      return nullptr;
    }
    ExprPtr lhs = parse_term(depth + 1);
    if (!lhs) return nullptr;
    while (true) {
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos;
      ExprPtr rhs = parse_term(depth + 1);
      if (!rhs) return nullptr;
      lhs = ex::binary(c == '+' ? BinaryOp::Add : BinaryOp::Sub, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_term(int depth) {
    if (depth > kMaxDepth) {
      fail(ExprError::Kind::Parse, pos, pos + 1, "expression nested too deeply");
      return nullptr;
    }
    ExprPtr lhs = parse_unary(depth + 1);
    if (!lhs) return nullptr;
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') break;
      ++pos;
      ExprPtr rhs = parse_unary(depth + 1);
      if (!rhs) return nullptr;
      lhs = ex::binary(c == '*' ? BinaryOp::Mul : BinaryOp::Div, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_unary(int depth) {
    if (depth > kMaxDepth) {
      fail(ExprError::Kind::Parse, pos, pos + 1, "expression nested too deeply");
      return nullptr;
    }
    if (accept('-')) {
      ExprPtr e = parse_unary(depth + 1);
      if (!e) return nullptr;
      return ex::unary(UnaryOp::Neg, e);
    }
    return parse_power(depth + 1);
  }

  ExprPtr parse_power(int depth) {
    ExprPtr base = parse_atom(depth + 1);
    if (!base) return nullptr;
    if (!accept('^')) return base;
    skip_ws();
    size_t begin = pos;
    bool neg = false;
    if (pos < src.size() && src[pos] == '-') {
      neg = true;
      ++pos;
    }
    size_t digits = 0;
    long value = 0;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      value = value * 10 + (src[pos] - '0');
      if (value > 1000) value = 1000;  // clamp, rejected below anyway
      ++pos;
      ++digits;
    }
    if (digits == 0) {
      fail(ExprError::Kind::Parse, begin, pos + 1,
           "expected integer exponent after '^'");
      return nullptr;
    }
    long e = neg ? -value : value;
    if (e < -6 || e > 6) {
      fail(ExprError::Kind::Parse, begin, pos,
           "exponent " + std::to_string(e) + " outside [-6, 6]");
      return nullptr;
    }
    return ex::power(base, static_cast<int>(e));
  }

  ExprPtr parse_atom(int depth) {
    if (depth > kMaxDepth) {
      fail(ExprError::Kind::Parse, pos, pos + 1, "expression nested too deeply");
      return nullptr;
    }
    skip_ws();
    if (pos >= src.size()) {
      fail(ExprError::Kind::Parse, pos, pos + 1, "unexpected end of input");
      return nullptr;
    }
    char c = src[pos];
    if (c == '(') {
      size_t open = pos;
      ++pos;
      ExprPtr e = parse_expression(depth + 1);
      if (!e) return nullptr;
      if (!accept(')')) {
        fail(ExprError::Kind::Parse, open, std::min(pos + 1, src.size()),
             "unclosed parenthesis");
        return nullptr;
      }
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident(depth);
    fail(ExprError::Kind::Lex, pos, pos + 1,
         std::string("illegal character '") + c + "'");
    return nullptr;
  }

  ExprPtr parse_number() {
    size_t begin = pos;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
      ++pos;
    // optional exponent part
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[pos])))
          ++pos;
      } else {
        pos = mark;  // 'e' belongs to a following identifier, not the number
      }
    }
    std::string text = src.substr(begin, pos - begin);
    char* endp = nullptr;
    double v = std::strtod(text.c_str(), &endp);
    if (endp != text.c_str() + text.size() || !std::isfinite(v)) {
      fail(ExprError::Kind::Lex, begin, pos, "malformed number '" + text + "'");
      return nullptr;
    }
    return ex::c(v);
  }

  ExprPtr parse_ident(int depth) {
    size_t begin = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name = src.substr(begin, pos - begin);
    skip_ws();
    bool call = pos < src.size() && src[pos] == '(';
    UnaryOp op;
    bool is_fn = true;
    if (name == "sin") op = UnaryOp::Sin;
    else if (name == "cos") op = UnaryOp::Cos;
    else if (name == "exp") op = UnaryOp::Exp;
    else if (name == "sqrt") op = UnaryOp::Sqrt;
    else is_fn = false;
    if (is_fn) {
      if (!call) {
        fail(ExprError::Kind::Parse, begin, pos,
             "function '" + name + "' must be called with parentheses");
        return nullptr;
      }
      size_t open = pos;
      ++pos;
      ExprPtr arg = parse_expression(depth + 1);
      if (!arg) return nullptr;
      if (!accept(')')) {
        fail(ExprError::Kind::Parse, begin, std::min(pos + 1, src.size()),
             "unclosed call to '" + name + "'");
        return nullptr;
      }
      (void)open;
      return ex::unary(op, arg);
    }
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return ex::var(static_cast<int>(i));
    fail(ExprError::Kind::UnboundVariable, begin, pos,
         "unbound variable '" + name + "'");
    return nullptr;
  }
};

}  // namespace

ParseResult parse_expr(const std::string& source,
                       const std::vector<std::string>& declared_vars) {
  Parser p(source, declared_vars);
  if (p.at_end()) {
    return {nullptr,
            ExprError{ExprError::Kind::Parse, 0, source.size(),
                      "empty expression"}};
  }
  ExprPtr e = p.parse_expression(0);
  if (e && !p.at_end()) {
    p.error.reset();
    p.fail(ExprError::Kind::Parse, p.pos, std::min(p.pos + 1, source.size()),
           "trailing input after expression");
    e = nullptr;
  }
  if (!e) {
    if (!p.error)
      p.fail(ExprError::Kind::Parse, 0, source.size(), "malformed expression");
    return {nullptr, p.error};
  }
  return {e, std::nullopt};
}

std::string unparse(const Expr& e) {
  std::ostringstream os;
  os.precision(17);
  switch (e.kind) {
    case Expr::Kind::Constant:
      if (e.constant < 0)
        os << "(" << e.constant << ")";
      else
        os << e.constant;
      break;
    case Expr::Kind::Variable:
      os << "v" << e.var;  // index form; callers with names should map back
      break;
    case Expr::Kind::Unary: {
      const char* fn = nullptr;
      switch (e.uop) {
        case UnaryOp::Neg: fn = nullptr; break;
        case UnaryOp::Sin: fn = "sin"; break;
        case UnaryOp::Cos: fn = "cos"; break;
        case UnaryOp::Exp: fn = "exp"; break;
        case UnaryOp::Sqrt: fn = "sqrt"; break;
      }
      if (fn)
        os << fn << "(" << unparse(*e.lhs) << ")";
      else
        os << "(-(" << unparse(*e.lhs) << "))";
      break;
    }
    case Expr::Kind::Binary: {
      char op = '+';
      switch (e.bop) {
        case BinaryOp::Add: op = '+'; break;
        case BinaryOp::Sub: op = '-'; break;
        case BinaryOp::Mul: op = '*'; break;
        case BinaryOp::Div: op = '/'; break;
      }
      os << "(" << unparse(*e.lhs) << op << unparse(*e.rhs) << ")";
      break;
    }
    case Expr::Kind::Power:
      os << "(" << unparse(*e.lhs) << ")^" << e.exponent;
      break;
  }
  return os.str();
}

Jet3 eval_jet(const Expr& e, const CoordPoint& p) {
  switch (e.kind) {
    case Expr::Kind::Constant:
      return Jet3::constant(p.dim(), e.constant);
    case Expr::Kind::Variable:
      if (e.var < 0 || e.var >= p.dim())
        throw ExprDomainError("variable index out of range at " + p.to_string());
      return Jet3::seed(p, e.var);
    case Expr::Kind::Unary: {
      Jet3 u = eval_jet(*e.lhs, p);
      try {
        switch (e.uop) {
          case UnaryOp::Neg: return -u;
          case UnaryOp::Sin: return sin(u);
          case UnaryOp::Cos: return cos(u);
          case UnaryOp::Exp: return exp(u);
          case UnaryOp::Sqrt: return sqrt(u);
        }
      } catch (const JetDomainError& err) {
        throw ExprDomainError(std::string(err.what()) + " at " + p.to_string());
      }
      break;
    }
    case Expr::Kind::Binary: {
      Jet3 a = eval_jet(*e.lhs, p);
      Jet3 b = eval_jet(*e.rhs, p);
      try {
        switch (e.bop) {
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Div: return a / b;
        }
      } catch (const JetDomainError& err) {
        throw ExprDomainError(std::string(err.what()) + " at " + p.to_string());
      }
      break;
    }
    case Expr::Kind::Power: {
      Jet3 b = eval_jet(*e.lhs, p);
      try {
        return pow(b, e.exponent);
      } catch (const JetDomainError& err) {
        throw ExprDomainError(std::string(err.what()) + " at " + p.to_string());
      }
    }
  }
  throw std::logic_error("eval_jet: unreachable");
}

double eval_value(const Expr& e, const CoordPoint& p) {
  switch (e.kind) {
    case Expr::Kind::Constant:
      return e.constant;
    case Expr::Kind::Variable:
      return p[e.var];
    case Expr::Kind::Unary: {
      double u = eval_value(*e.lhs, p);
      switch (e.uop) {
        case UnaryOp::Neg: return -u;
        case UnaryOp::Sin: return std::sin(u);
        case UnaryOp::Cos: return std::cos(u);
        case UnaryOp::Exp: return std::exp(u);
        case UnaryOp::Sqrt:
          if (u <= 0.0)
            throw ExprDomainError("sqrt of nonpositive value at " + p.to_string());
          return std::sqrt(u);
      }
      break;
    }
    case Expr::Kind::Binary: {
      double a = eval_value(*e.lhs, p);
      double b = eval_value(*e.rhs, p);
      switch (e.bop) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (b == 0.0)
            throw ExprDomainError("division by zero at " + p.to_string());
          return a / b;
      }
      break;
    }
    case Expr::Kind::Power: {
      double b = eval_value(*e.lhs, p);
      if (e.exponent < 0 && b == 0.0)
        throw ExprDomainError("negative power of zero at " + p.to_string());
      return std::pow(b, e.exponent);
    }
  }
  throw std::logic_error("eval_value: unreachable");
}

ExprPtr shift_vars(const ExprPtr& e, int offset) {
  if (!e) return nullptr;
  switch (e->kind) {
    case Expr::Kind::Constant:
      return e;
    case Expr::Kind::Variable:
      return ex::var(e->var + offset);
    case Expr::Kind::Unary:
      return ex::unary(e->uop, shift_vars(e->lhs, offset));
    case Expr::Kind::Binary:
      return ex::binary(e->bop, shift_vars(e->lhs, offset),
                        shift_vars(e->rhs, offset));
    case Expr::Kind::Power:
      return ex::power(shift_vars(e->lhs, offset), e->exponent);
  }
  return nullptr;
}

namespace {

/// A negated constant and the constant of the opposite sign denote the
/// same tree for comparison purposes; the parser can only produce the
/// former since a leading '-' lexes as unary negation.
const Expr* fold_negated_constant(const Expr& e, double* value) {
  if (e.kind == Expr::Kind::Constant) {
    *value = e.constant;
    return &e;
  }
  if (e.kind == Expr::Kind::Unary && e.uop == UnaryOp::Neg &&
      e.lhs->kind == Expr::Kind::Constant) {
    *value = -e.lhs->constant;
    return e.lhs.get();
  }
  return nullptr;
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  double ca = 0.0, cb = 0.0;
  if (fold_negated_constant(a, &ca) && fold_negated_constant(b, &cb))
    return ca == cb;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Constant: return a.constant == b.constant;
    case Expr::Kind::Variable: return a.var == b.var;
    case Expr::Kind::Unary:
      return a.uop == b.uop && structurally_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.bop == b.bop && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
    case Expr::Kind::Power:
      return a.exponent == b.exponent && structurally_equal(*a.lhs, *b.lhs);
  }
  return false;
}

}  // namespace solitonlab
