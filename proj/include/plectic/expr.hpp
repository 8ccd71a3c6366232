#ifndef PLECTIC_EXPR_HPP
#define PLECTIC_EXPR_HPP

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plectic {

// Evaluation hit a declared guard (division or sqrt too close to zero).
struct DomainGuardError : std::runtime_error {
  explicit DomainGuardError(const std::string& what) : std::runtime_error(what) {}
};

struct ExprParseError : std::runtime_error {
  explicit ExprParseError(const std::string& what) : std::runtime_error(what) {}
};

// Closed-form scalar expression over chart variables x0..x{n-1}: constants,
// + - * /, integer powers, sin, cos, exp, sqrt, neg. Immutable; closed under
// exact differentiation. Construction folds constants and drops additive and
// multiplicative identities, nothing more.
class Expr {
 public:
  Expr() : Expr(0.0) {}
  Expr(double c);  // NOLINT: implicit constants keep field formulas readable
  static Expr var(int index);

  Expr diff(int var) const;
  Expr subst(std::span<const Expr> replacements) const;
  double eval(std::span<const double> x) const;

  bool is_constant() const;        // structurally constant (no variables)
  double constant_value() const;   // valid when is_constant()
  bool is_zero() const;            // structurally the constant 0

  std::string str() const;               // canonical prefix syntax
  static Expr parse(const std::string&); // bit-exact round trip with str()

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, int);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr sqrt(const Expr&);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace plectic

#endif
