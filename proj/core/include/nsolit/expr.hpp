#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsolit/errors.hpp"

namespace nsolit::expr {

enum class Kind : std::uint8_t { Constant, Variable, Power, Product, Sum, Function };
enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

[[nodiscard]] const char* func_name(Func f);

/// Reduced fraction with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1);

  [[nodiscard]] bool is_integer() const { return den == 1; }
  [[nodiscard]] double value() const { return double(num) / double(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend Rational operator+(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator-(Rational a) { return {-a.num, a.den}; }
};

class Expr;

struct Node {
  Kind kind;
  Func func = Func::Sin;
  double value = 0.0;
  Rational exponent;
  std::string name;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

/// Immutable shared expression tree. Copies are cheap and share nodes.
class Expr {
 public:
  Expr();  // constant 0
  Expr(double c);  // NOLINT: constants convert implicitly

  static Expr constant(double c);
  static Expr variable(std::string name);
  // Raw constructors keep their argument lists as given (no flattening).
  static Expr raw_sum(std::vector<Expr> terms);
  static Expr raw_product(std::vector<Expr> factors);
  static Expr power(Expr base, Rational r);
  static Expr apply(Func f, Expr arg);

  [[nodiscard]] Kind kind() const { return node_->kind; }
  [[nodiscard]] double value() const { return node_->value; }
  [[nodiscard]] const std::string& name() const { return node_->name; }
  [[nodiscard]] Func func() const { return node_->func; }
  [[nodiscard]] Rational exponent() const { return node_->exponent; }
  [[nodiscard]] const std::vector<Expr>& args() const { return node_->args; }
  [[nodiscard]] std::size_t hash() const { return node_->hash; }
  [[nodiscard]] const Node* get() const { return node_.get(); }

  [[nodiscard]] bool is_constant() const { return kind() == Kind::Constant; }
  [[nodiscard]] bool is_constant(double c) const { return is_constant() && value() == c; }
  [[nodiscard]] bool is_zero() const { return is_constant(0.0); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Convenience algebra with light folding (0/1 absorption, constant folding,
// flattening). Full normalization is simplify_basic's job.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, Rational r);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sum(std::span<const Expr> terms);

/// Structural total order; equal iff trees are structurally identical.
[[nodiscard]] int compare(const Expr& a, const Expr& b);
[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);

[[nodiscard]] Expr parse_expr(std::string_view text, std::span<const std::string> allowed_vars);
[[nodiscard]] std::string to_string(const Expr& e);

/// Exact symbolic derivative. Variables other than `var` are constants.
[[nodiscard]] Expr differentiate(const Expr& e, std::string_view var);
/// As above, but rejects a `var` that is not among `known`.
[[nodiscard]] Expr differentiate(const Expr& e, std::string_view var,
                                 std::span<const std::string> known);

[[nodiscard]] double evaluate(const Expr& e, const std::map<std::string, double>& point);

[[nodiscard]] Expr simplify_basic(const Expr& e);

/// Names of free variables, sorted.
[[nodiscard]] std::vector<std::string> free_variables(const Expr& e);

/// Number of distinct nodes (DAG size).
[[nodiscard]] std::size_t node_count(const Expr& e);

using Matrix = std::vector<std::vector<Expr>>;

[[nodiscard]] Expr determinant(const Matrix& m);
/// Adjugate over determinant; throws SingularMatrix if the determinant simplifies to 0.
[[nodiscard]] Matrix matrix_inverse_sym(const Matrix& m);

/// Tape-compiled evaluator for a batch of expressions over fixed variable slots.
/// Common subtrees are evaluated once.
class Compiled {
 public:
  Compiled() = default;
  Compiled(std::span<const Expr> outputs, std::span<const std::string> vars);

  [[nodiscard]] std::size_t outputs() const { return out_.size(); }
  [[nodiscard]] const std::vector<std::string>& vars() const { return vars_; }
  /// Evaluates all outputs at `x` (one value per variable slot).
  void eval(std::span<const double> x, std::span<double> out) const;
  [[nodiscard]] std::vector<double> eval(std::span<const double> x) const;

 private:
  struct Op {
    Kind kind;
    Func func;
    double c;
    Rational r;
    std::uint32_t first;
    std::uint32_t count;
  };
  std::vector<Op> ops_;
  std::vector<std::uint32_t> arg_;
  std::vector<std::uint32_t> out_;
  std::vector<std::string> vars_;
};

/// Real power with rational exponent; odd roots of negatives are real.
[[nodiscard]] double rational_pow(double b, Rational r);

}  // namespace nsolit::expr
