#pragma once

// Scalar field expressions in the chart variables x1..xm.
//
// Grammar (whitespace ignored):
//
//   expr     := term { ('+' | '-') term }
//   term     := unary { ('*' | '/') unary }
//   unary    := '-' unary | power
//   power    := primary [ '^' exponent ]
//   exponent := '-' exponent | power            (right associative)
//   primary  := number | 'x' digits | func '(' expr ')' | '(' expr ')'
//   func     := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt'
//   number   := digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ]
//
// So '^' binds tighter than unary minus (-x1^2 == -(x1^2)) and 2^3^2 ==
// 2^(3^2). Exponents must not depend on the variables.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbgeom/errors.hpp"
#include "tbgeom/jet.hpp"

namespace tbgeom {

enum class ExprKind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Exp, Log, Sin, Cos, Sqrt };

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;   // Number
  std::size_t var = 0;   // Variable, zero based
  Func func = Func::Exp; // Call
  std::shared_ptr<const ExprNode> lhs, rhs;
};

inline const char* func_name(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

/// Immutable, cheaply copyable expression bound to a dimension m.
class Expr {
 public:
  Expr() = default;
  Expr(std::shared_ptr<const ExprNode> root, std::size_t dim) : root_(std::move(root)), dim_(dim) {}

  const ExprNode& root() const { return *root_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return !root_; }

  /// True when the expression contains no variable.
  bool is_constant() const { return root_ && !depends_on_vars(*root_); }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.dim_ != b.dim_) return false;
    if (!a.root_ || !b.root_) return a.root_ == b.root_;
    return same(*a.root_, *b.root_);
  }

  static bool depends_on_vars(const ExprNode& n) {
    if (n.kind == ExprKind::Variable) return true;
    return (n.lhs && depends_on_vars(*n.lhs)) || (n.rhs && depends_on_vars(*n.rhs));
  }

 private:
  static bool same(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case ExprKind::Number: return a.number == b.number;
      case ExprKind::Variable: return a.var == b.var;
      case ExprKind::Call:
        if (a.func != b.func) return false;
        break;
      default: break;
    }
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
    if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
    return (!a.lhs || same(*a.lhs, *b.lhs)) && (!a.rhs || same(*a.rhs, *b.rhs));
  }

  std::shared_ptr<const ExprNode> root_;
  std::size_t dim_ = 0;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, std::size_t dim) : s_(text), dim_(dim) {}

  std::shared_ptr<const ExprNode> parse() {
    skip_ws();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "empty expression");
    auto e = expr();
    skip_ws();
    if (pos_ < s_.size()) throw SyntaxError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  using NodePtr = std::shared_ptr<const ExprNode>;

  static NodePtr make(ExprKind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw SyntaxError(pos_, std::string("expected '") + c + "' before end of input");
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(ExprKind::Add, lhs, term());
      else if (accept('-')) lhs = make(ExprKind::Sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(ExprKind::Mul, lhs, unary());
      else if (accept('/')) lhs = make(ExprKind::Div, lhs, unary());
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(ExprKind::Negate, unary());
    return power();
  }
  NodePtr exponent() {
    if (accept('-')) return make(ExprKind::Negate, exponent());
    return power();
  }
  NodePtr power() {
    auto base = primary();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^')) {
      auto ex = exponent();
      if (Expr::depends_on_vars(*ex)) throw SyntaxError(at, "exponent must be constant");
      return make(ExprKind::Pow, base, ex);
    }
    return base;
  }
  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }
  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++k;
      return k;
    };
    std::size_t nd = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) throw SyntaxError(start, "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    double v = 0.0;
    const std::string tok(s_.substr(start, pos_ - start));
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      throw SyntaxError(start, "number out of range");
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->number = v;
    return n;
  }
  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const unsigned long idx = std::stoul(name.substr(1));
      if (idx < 1 || idx > dim_) throw UnknownSymbol(start, name);
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Variable;
      n->var = idx - 1;
      return n;
    }
    static constexpr Func funcs[] = {Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sqrt};
    for (Func f : funcs) {
      if (name == func_name(f)) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '(') throw SyntaxError(pos_, "expected '(' after " + name);
        ++pos_;
        auto arg = expr();
        expect(')');
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Call;
        n->func = f;
        n->lhs = std::move(arg);
        return n;
      }
    }
    throw UnknownSymbol(start, name);
  }

  std::string_view s_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

inline void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprKind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case ExprKind::Variable: out += "x" + std::to_string(n.var + 1); return;
    case ExprKind::Negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ")";
      return;
    case ExprKind::Call:
      out += func_name(n.func);
      out += "(";
      print_node(*n.lhs, out);
      out += ")";
      return;
    default: break;
  }
  const char op = n.kind == ExprKind::Add   ? '+'
                  : n.kind == ExprKind::Sub ? '-'
                  : n.kind == ExprKind::Mul ? '*'
                  : n.kind == ExprKind::Div ? '/'
                                            : '^';
  out += "(";
  print_node(*n.lhs, out);
  out += op;
  print_node(*n.rhs, out);
  out += ")";
}

inline double eval_constant(const ExprNode& n);

inline Jet eval_node(const ExprNode& n, std::span<const Jet> vars) {
  switch (n.kind) {
    case ExprKind::Number: return Jet::constant(n.number);
    case ExprKind::Variable: return vars[n.var];
    case ExprKind::Negate: return -eval_node(*n.lhs, vars);
    case ExprKind::Add: return eval_node(*n.lhs, vars) + eval_node(*n.rhs, vars);
    case ExprKind::Sub: return eval_node(*n.lhs, vars) - eval_node(*n.rhs, vars);
    case ExprKind::Mul: return eval_node(*n.lhs, vars) * eval_node(*n.rhs, vars);
    case ExprKind::Div: return eval_node(*n.lhs, vars) / eval_node(*n.rhs, vars);
    case ExprKind::Pow: return pow(eval_node(*n.lhs, vars), eval_constant(*n.rhs));
    case ExprKind::Call: {
      Jet a = eval_node(*n.lhs, vars);
      switch (n.func) {
        case Func::Exp: return exp(a);
        case Func::Log: return log(a);
        case Func::Sin: return sin(a);
        case Func::Cos: return cos(a);
        case Func::Sqrt: return sqrt(a);
      }
    }
  }
  throw DomainError("corrupt expression");
}

inline double eval_constant(const ExprNode& n) { return eval_node(n, {}).value(); }

}  // namespace detail

/// Parses `text` as an expression in x1..x{dim}.
inline Expr parse(std::string_view text, std::size_t dim) {
  if (text.empty()) throw SyntaxError(0, "empty expression");
  return Expr(detail::Parser(text, dim).parse(), dim);
}

/// Fully parenthesized text that parses back to the same tree.
inline std::string to_string(const Expr& e) {
  std::string out;
  if (!e.empty()) detail::print_node(e.root(), out);
  return out;
}

/// Evaluates the expression and its derivatives up to `order` at x.
inline Jet eval_jet(const Expr& e, std::span<const double> x, int order = kMaxJetOrder) {
  if (x.size() != e.dim()) throw PreconditionError("point dimension does not match expression");
  std::vector<Jet> vars;
  vars.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) vars.push_back(Jet::variable(x.size(), order, i, x[i]));
  Jet r = detail::eval_node(e.root(), vars);
  if (r.is_constant()) return Jet(x.size(), order, r.value());
  return r;
}

/// Evaluates the expression with jets given for each variable (chain rule
/// through an arbitrary inner map).
inline Jet eval_jet(const Expr& e, std::span<const Jet> vars) {
  if (vars.size() != e.dim()) throw PreconditionError("variable count does not match expression");
  return detail::eval_node(e.root(), vars);
}

inline double eval(const Expr& e, std::span<const double> x) { return eval_jet(e, x, 0).value(); }

}  // namespace tbgeom
