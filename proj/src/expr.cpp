#include "plectic/expr.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace plectic {

namespace {
constexpr double kGuardEps = 1e-12;
}

struct Expr::Node {
  enum Kind { Const, Var, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Neg } kind;
  double cval = 0.0;
  int var = -1;
  int ipow = 0;
  std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Expr::Node>;

namespace {

NodePtr make_const(double c) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Const;
  n->cval = c;
  return n;
}

NodePtr make_var(int i) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Var;
  n->var = i;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->kind == Expr::Node::Const && n->cval == v; }
bool is_const(const NodePtr& n) { return n->kind == Expr::Node::Const; }

NodePtr make_unary(Expr::Node::Kind k, NodePtr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Expr::Node::Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr build_add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->cval + b->cval);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make_binary(Expr::Node::Add, std::move(a), std::move(b));
}

NodePtr build_neg(NodePtr a) {
  if (is_const(a)) return make_const(-a->cval);
  if (a->kind == Expr::Node::Neg) return a->a;
  return make_unary(Expr::Node::Neg, std::move(a));
}

NodePtr build_sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->cval - b->cval);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return build_neg(b);
  return make_binary(Expr::Node::Sub, std::move(a), std::move(b));
}

NodePtr build_mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->cval * b->cval);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a, -1.0)) return build_neg(b);
  if (is_const(b, -1.0)) return build_neg(a);
  return make_binary(Expr::Node::Mul, std::move(a), std::move(b));
}

NodePtr build_div(NodePtr a, NodePtr b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a) && is_const(b) && std::abs(b->cval) > kGuardEps)
    return make_const(a->cval / b->cval);
  return make_binary(Expr::Node::Div, std::move(a), std::move(b));
}

NodePtr build_pow(NodePtr a, int k) {
  if (k == 0) return make_const(1.0);
  if (k == 1) return a;
  if (is_const(a)) return make_const(std::pow(a->cval, k));
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Pow;
  n->a = std::move(a);
  n->ipow = k;
  return n;
}

}  // namespace

Expr::Expr(double c) : node_(make_const(c)) {}
Expr Expr::var(int index) { return Expr(make_var(index)); }

Expr operator+(const Expr& x, const Expr& y) { return Expr(build_add(x.node_, y.node_)); }
Expr operator-(const Expr& x, const Expr& y) { return Expr(build_sub(x.node_, y.node_)); }
Expr operator*(const Expr& x, const Expr& y) { return Expr(build_mul(x.node_, y.node_)); }
Expr operator/(const Expr& x, const Expr& y) { return Expr(build_div(x.node_, y.node_)); }
Expr operator-(const Expr& x) { return Expr(build_neg(x.node_)); }
Expr pow(const Expr& x, int k) { return Expr(build_pow(x.node_, k)); }
Expr sin(const Expr& x) {
  if (is_const(x.node_)) return Expr(std::sin(x.node_->cval));
  return Expr(make_unary(Expr::Node::Sin, x.node_));
}
Expr cos(const Expr& x) {
  if (is_const(x.node_)) return Expr(std::cos(x.node_->cval));
  return Expr(make_unary(Expr::Node::Cos, x.node_));
}
Expr exp(const Expr& x) {
  if (is_const(x.node_)) return Expr(std::exp(x.node_->cval));
  return Expr(make_unary(Expr::Node::Exp, x.node_));
}
Expr sqrt(const Expr& x) {
  if (is_const(x.node_) && x.node_->cval > 0) return Expr(std::sqrt(x.node_->cval));
  return Expr(make_unary(Expr::Node::Sqrt, x.node_));
}

bool Expr::is_constant() const {
  switch (node_->kind) {
    case Node::Const: return true;
    case Node::Var: return false;
    case Node::Pow:
    case Node::Sin:
    case Node::Cos:
    case Node::Exp:
    case Node::Sqrt:
    case Node::Neg: return Expr(node_->a).is_constant();
    default: return Expr(node_->a).is_constant() && Expr(node_->b).is_constant();
  }
}

double Expr::constant_value() const { return eval(std::span<const double>{}); }
bool Expr::is_zero() const { return node_->kind == Node::Const && node_->cval == 0.0; }

Expr Expr::diff(int v) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Node::Const: return Expr(0.0);
    case Node::Var: return Expr(n.var == v ? 1.0 : 0.0);
    case Node::Add: return Expr(n.a).diff(v) + Expr(n.b).diff(v);
    case Node::Sub: return Expr(n.a).diff(v) - Expr(n.b).diff(v);
    case Node::Mul: return Expr(n.a).diff(v) * Expr(n.b) + Expr(n.a) * Expr(n.b).diff(v);
    case Node::Div: {
      Expr a(n.a), b(n.b);
      return (a.diff(v) * b - a * b.diff(v)) / (b * b);
    }
    case Node::Pow: {
      Expr a(n.a);
      return Expr(static_cast<double>(n.ipow)) * pow(a, n.ipow - 1) * a.diff(v);
    }
    case Node::Sin: return cos(Expr(n.a)) * Expr(n.a).diff(v);
    case Node::Cos: return -(sin(Expr(n.a)) * Expr(n.a).diff(v));
    case Node::Exp: return exp(Expr(n.a)) * Expr(n.a).diff(v);
    case Node::Sqrt: return Expr(n.a).diff(v) / (Expr(2.0) * sqrt(Expr(n.a)));
    case Node::Neg: return -Expr(n.a).diff(v);
  }
  throw std::logic_error("diff: unreachable");
}

Expr Expr::subst(std::span<const Expr> repl) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Node::Const: return *this;
    case Node::Var:
      if (n.var < 0 || n.var >= static_cast<int>(repl.size()))
        throw std::invalid_argument("subst: variable index out of range");
      return repl[static_cast<std::size_t>(n.var)];
    case Node::Add: return Expr(n.a).subst(repl) + Expr(n.b).subst(repl);
    case Node::Sub: return Expr(n.a).subst(repl) - Expr(n.b).subst(repl);
    case Node::Mul: return Expr(n.a).subst(repl) * Expr(n.b).subst(repl);
    case Node::Div: return Expr(n.a).subst(repl) / Expr(n.b).subst(repl);
    case Node::Pow: return pow(Expr(n.a).subst(repl), n.ipow);
    case Node::Sin: return sin(Expr(n.a).subst(repl));
    case Node::Cos: return cos(Expr(n.a).subst(repl));
    case Node::Exp: return exp(Expr(n.a).subst(repl));
    case Node::Sqrt: return sqrt(Expr(n.a).subst(repl));
    case Node::Neg: return -Expr(n.a).subst(repl);
  }
  throw std::logic_error("subst: unreachable");
}

namespace {

double eval_node(const Expr::Node& n, std::span<const double> x) {
  switch (n.kind) {
    case Expr::Node::Const: return n.cval;
    case Expr::Node::Var:
      if (n.var < 0 || n.var >= static_cast<int>(x.size()))
        throw std::invalid_argument("eval: variable index out of range");
      return x[static_cast<std::size_t>(n.var)];
    case Expr::Node::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Expr::Node::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Expr::Node::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Expr::Node::Div: {
      double den = eval_node(*n.b, x);
      if (std::abs(den) < kGuardEps)
        throw DomainGuardError("division guard: denominator within " +
                               std::to_string(kGuardEps) + " of zero");
      return eval_node(*n.a, x) / den;
    }
    case Expr::Node::Pow: {
      double base = eval_node(*n.a, x);
      if (n.ipow < 0 && std::abs(base) < kGuardEps)
        throw DomainGuardError("division guard: negative power of near-zero base");
      return std::pow(base, n.ipow);
    }
    case Expr::Node::Sin: return std::sin(eval_node(*n.a, x));
    case Expr::Node::Cos: return std::cos(eval_node(*n.a, x));
    case Expr::Node::Exp: return std::exp(eval_node(*n.a, x));
    case Expr::Node::Sqrt: {
      double arg = eval_node(*n.a, x);
      if (arg < kGuardEps) throw DomainGuardError("sqrt guard: argument below " +
                                                  std::to_string(kGuardEps));
      return std::sqrt(arg);
    }
    case Expr::Node::Neg: return -eval_node(*n.a, x);
  }
  throw std::logic_error("eval: unreachable");
}

void print_node(const Expr::Node& n, std::string& out) {
  char buf[40];
  switch (n.kind) {
    case Expr::Node::Const:
      std::snprintf(buf, sizeof buf, "%.17g", n.cval);
      out += buf;
      return;
    case Expr::Node::Var:
      out += 'x';
      out += std::to_string(n.var);
      return;
    case Expr::Node::Add: out += "(+ "; break;
    case Expr::Node::Sub: out += "(- "; break;
    case Expr::Node::Mul: out += "(* "; break;
    case Expr::Node::Div: out += "(/ "; break;
    case Expr::Node::Pow: out += "(pow "; break;
    case Expr::Node::Sin: out += "(sin "; break;
    case Expr::Node::Cos: out += "(cos "; break;
    case Expr::Node::Exp: out += "(exp "; break;
    case Expr::Node::Sqrt: out += "(sqrt "; break;
    case Expr::Node::Neg: out += "(neg "; break;
  }
  print_node(*n.a, out);
  if (n.kind == Expr::Node::Pow) {
    out += ' ';
    out += std::to_string(n.ipow);
  } else if (n.b) {
    out += ' ';
    print_node(*n.b, out);
  }
  out += ')';
}

struct Parser {
  const char* p;
  const char* end;

  void skip_ws() {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r')) ++p;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ExprParseError("expression parse error: " + msg);
  }

  std::string token() {
    skip_ws();
    const char* s = p;
    while (p < end && *p != ' ' && *p != '\t' && *p != '\n' && *p != '\r' && *p != '(' && *p != ')') ++p;
    if (s == p) fail("expected token");
    return std::string(s, p);
  }

  NodePtr atom(const std::string& t) {
    if (t.size() >= 2 && t[0] == 'x' && std::isdigit(static_cast<unsigned char>(t[1]))) {
      char* rest = nullptr;
      long v = std::strtol(t.c_str() + 1, &rest, 10);
      if (*rest == '\0') return make_var(static_cast<int>(v));
    }
    char* rest = nullptr;
    double c = std::strtod(t.c_str(), &rest);
    if (rest && *rest == '\0') return make_const(c);
    fail("unknown atom '" + t + "'");
  }

  NodePtr expr() {
    skip_ws();
    if (p >= end) fail("unexpected end of input");
    if (*p != '(') return atom(token());
    ++p;  // consume '('
    std::string op = token();
    NodePtr r;
    if (op == "+" || op == "-" || op == "*" || op == "/") {
      NodePtr a = expr();
      NodePtr b = expr();
      auto kind = op == "+" ? Expr::Node::Add
                : op == "-" ? Expr::Node::Sub
                : op == "*" ? Expr::Node::Mul
                            : Expr::Node::Div;
      r = make_binary(kind, std::move(a), std::move(b));
    } else if (op == "pow") {
      NodePtr a = expr();
      std::string k = token();
      char* rest = nullptr;
      long e = std::strtol(k.c_str(), &rest, 10);
      if (*rest != '\0') fail("pow exponent must be an integer");
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Pow;
      n->a = std::move(a);
      n->ipow = static_cast<int>(e);
      r = n;
    } else if (op == "sin" || op == "cos" || op == "exp" || op == "sqrt" || op == "neg") {
      NodePtr a = expr();
      auto kind = op == "sin" ? Expr::Node::Sin
                : op == "cos" ? Expr::Node::Cos
                : op == "exp" ? Expr::Node::Exp
                : op == "sqrt" ? Expr::Node::Sqrt
                               : Expr::Node::Neg;
      r = make_unary(kind, std::move(a));
    } else {
      fail("unknown operator '" + op + "'");
    }
    skip_ws();
    if (p >= end || *p != ')') fail("expected ')'");
    ++p;
    return r;
  }
};

}  // namespace

double Expr::eval(std::span<const double> x) const { return eval_node(*node_, x); }

std::string Expr::str() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

Expr Expr::parse(const std::string& text) {
  Parser parser{text.data(), text.data() + text.size()};
  NodePtr n = parser.expr();
  parser.skip_ws();
  if (parser.p != parser.end) parser.fail("trailing input");
  return Expr(std::move(n));
}

}  // namespace plectic
