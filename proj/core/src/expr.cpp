#include "nsolit/expr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace nsolit::expr {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
  }
  return "?";
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (d == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  // boost::hash_combine constant, 64-bit variant
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4));
}

std::size_t fnv(std::string_view s) {
  std::size_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t hash_node(const Node& n) {
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(n.kind));
  switch (n.kind) {
    case Kind::Constant: {
      const double v = n.value == 0.0 ? 0.0 : n.value;  // fold -0
      h = mix(h, std::bit_cast<std::uint64_t>(v));
      break;
    }
    case Kind::Variable: h = mix(h, fnv(n.name)); break;
    case Kind::Power:
      h = mix(h, static_cast<std::size_t>(n.exponent.num));
      h = mix(h, static_cast<std::size_t>(n.exponent.den));
      break;
    case Kind::Function: h = mix(h, static_cast<std::size_t>(n.func)); break;
    default: break;
  }
  for (const Expr& a : n.args) h = mix(h, a.hash());
  return h;
}

std::shared_ptr<Node> new_node(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

}  // namespace

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double c) {
  auto n = new_node(Kind::Constant);
  n->value = c == 0.0 ? 0.0 : c;
  n->hash = hash_node(*n);
  node_ = std::move(n);
}

Expr Expr::constant(double c) { return Expr(c); }

Expr Expr::variable(std::string name) {
  auto n = new_node(Kind::Variable);
  n->name = std::move(name);
  n->hash = hash_node(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::raw_sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr(0.0);
  if (terms.size() == 1) return terms.front();
  auto n = new_node(Kind::Sum);
  n->args = std::move(terms);
  n->hash = hash_node(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::raw_product(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1.0);
  if (factors.size() == 1) return factors.front();
  auto n = new_node(Kind::Product);
  n->args = std::move(factors);
  n->hash = hash_node(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::power(Expr base, Rational r) {
  auto n = new_node(Kind::Power);
  n->exponent = r;
  n->args.push_back(std::move(base));
  n->hash = hash_node(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::apply(Func f, Expr arg) {
  auto n = new_node(Kind::Function);
  n->func = f;
  n->args.push_back(std::move(arg));
  n->hash = hash_node(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

double rational_pow(double b, Rational r) {
  if (b == 0.0 && r.num < 0) throw DomainError("division by zero");
  if (r.is_integer()) return std::pow(b, double(r.num));
  if (b < 0.0) {
    if (r.den % 2 == 0) throw DomainError("even root of negative value");
    const double m = std::pow(-b, r.value());
    return (r.num % 2 != 0) ? -m : m;
  }
  return std::pow(b, r.value());
}

// ── light-folding algebra ──

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  std::vector<Expr> t;
  for (const Expr* e : {&a, &b}) {
    if (e->kind() == Kind::Sum)
      t.insert(t.end(), e->args().begin(), e->args().end());
    else
      t.push_back(*e);
  }
  return Expr::raw_sum(std::move(t));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  double c = 1.0;
  std::vector<Expr> f;
  for (const Expr* e : {&a, &b}) {
    auto take = [&](const Expr& x) {
      if (x.is_constant())
        c *= x.value();
      else
        f.push_back(x);
    };
    if (e->kind() == Kind::Product)
      for (const Expr& x : e->args()) take(x);
    else
      take(*e);
  }
  if (c == 0.0) return Expr(0.0);
  if (c != 1.0 || f.empty()) f.insert(f.begin(), Expr(c));
  return Expr::raw_product(std::move(f));
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.value());
  return Expr(-1.0) * a;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator/(const Expr& a, const Expr& b) { return a * pow(b, Rational(-1)); }

Expr pow(const Expr& base, Rational r) {
  if (r.num == 0) return Expr(1.0);
  if (r == Rational(1)) return base;
  if (base.is_constant()) {
    try {
      const double v = rational_pow(base.value(), r);
      if (std::isfinite(v)) return Expr(v);
    } catch (const DomainError&) {
    }
  }
  if (base.kind() == Kind::Power && r.is_integer())
    return pow(base.args()[0], base.exponent() * r);
  return Expr::power(base, r);
}

namespace {

Expr fold_apply(Func f, const Expr& a) {
  if (a.is_zero()) {
    switch (f) {
      case Func::Sin:
      case Func::Tan:
      case Func::Sinh:
      case Func::Sqrt: return Expr(0.0);
      case Func::Cos:
      case Func::Cosh:
      case Func::Exp: return Expr(1.0);
      case Func::Log: break;
    }
  }
  return Expr::apply(f, a);
}

}  // namespace

Expr sin(const Expr& a) { return fold_apply(Func::Sin, a); }
Expr cos(const Expr& a) { return fold_apply(Func::Cos, a); }
Expr sqrt(const Expr& a) { return fold_apply(Func::Sqrt, a); }
Expr exp(const Expr& a) { return fold_apply(Func::Exp, a); }
Expr log(const Expr& a) { return fold_apply(Func::Log, a); }

Expr sum(std::span<const Expr> terms) {
  std::vector<Expr> t;
  double c = 0.0;
  for (const Expr& e : terms) {
    if (e.is_constant())
      c += e.value();
    else if (e.kind() == Kind::Sum)
      t.insert(t.end(), e.args().begin(), e.args().end());
    else
      t.push_back(e);
  }
  if (c != 0.0 || t.empty()) t.insert(t.begin(), Expr(c));
  return Expr::raw_sum(std::move(t));
}

// ── structural order ──

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case Kind::Variable: {
      const int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Power: {
      if (int c = compare(a.args()[0], b.args()[0]); c != 0) return c;
      const Rational ra = a.exponent(), rb = b.exponent();
      if (ra == rb) return 0;
      // cross-multiplied comparison, denominators positive
      return ra.num * rb.den < rb.num * ra.den ? -1 : 1;
    }
    case Kind::Function:
      if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
      return compare(a.args()[0], b.args()[0]);
    case Kind::Sum:
    case Kind::Product: {
      if (a.hash() == b.hash() && a.args().size() == b.args().size()) {
        bool same = true;
        for (std::size_t i = 0; i < a.args().size() && same; ++i)
          same = structurally_equal(a.args()[i], b.args()[i]);
        if (same) return 0;
      }
      const auto& x = a.args();
      const auto& y = b.args();
      for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
        if (int c = compare(x[i], y[i]); c != 0) return c;
      if (x.size() == y.size()) return 0;
      return x.size() < y.size() ? -1 : 1;
    }
  }
  return 0;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

// ── traversal helpers ──

std::vector<std::string> free_variables(const Expr& e) {
  std::set<std::string> names;
  std::unordered_set<const Node*> seen;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr x = stack.back();
    stack.pop_back();
    if (!seen.insert(x.get()).second) continue;
    if (x.kind() == Kind::Variable) names.insert(x.name());
    for (const Expr& a : x.args()) stack.push_back(a);
  }
  return {names.begin(), names.end()};
}

std::size_t node_count(const Expr& e) {
  std::unordered_set<const Node*> seen;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr x = stack.back();
    stack.pop_back();
    if (!seen.insert(x.get()).second) continue;
    for (const Expr& a : x.args()) stack.push_back(a);
  }
  return seen.size();
}

// ── differentiation ──

namespace {

class Differentiator {
 public:
  explicit Differentiator(std::string_view var) : var_(var) {}

  Expr operator()(const Expr& e) {
    if (!depends(e)) return Expr(0.0);
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr d = rule(e);
    memo_.emplace(e.get(), d);
    return d;
  }

 private:
  bool depends(const Expr& e) {
    if (auto it = dep_.find(e.get()); it != dep_.end()) return it->second;
    bool d = false;
    if (e.kind() == Kind::Variable)
      d = e.name() == var_;
    else
      for (const Expr& a : e.args()) d = d || depends(a);
    dep_.emplace(e.get(), d);
    return d;
  }

  Expr rule(const Expr& e) {
    switch (e.kind()) {
      case Kind::Constant: return Expr(0.0);
      case Kind::Variable: return Expr(e.name() == var_ ? 1.0 : 0.0);
      case Kind::Sum: {
        std::vector<Expr> t;
        for (const Expr& a : e.args()) t.push_back((*this)(a));
        return sum(t);
      }
      case Kind::Product: {
        const auto& f = e.args();
        std::vector<Expr> t;
        for (std::size_t i = 0; i < f.size(); ++i) {
          Expr di = (*this)(f[i]);
          if (di.is_zero()) continue;
          Expr term = di;
          for (std::size_t j = 0; j < f.size(); ++j)
            if (j != i) term = term * f[j];
          t.push_back(term);
        }
        return sum(t);
      }
      case Kind::Power: {
        const Expr& u = e.args()[0];
        const Rational r = e.exponent();
        return Expr(r.value()) * pow(u, r + Rational(-1)) * (*this)(u);
      }
      case Kind::Function: {
        const Expr& u = e.args()[0];
        const Expr du = (*this)(u);
        switch (e.func()) {
          case Func::Sin: return cos(u) * du;
          case Func::Cos: return -(sin(u) * du);
          case Func::Tan: return (Expr(1.0) + pow(e, Rational(2))) * du;
          case Func::Exp: return e * du;
          case Func::Log: return pow(u, Rational(-1)) * du;
          case Func::Sqrt: return Expr(0.5) * pow(u, Rational(-1, 2)) * du;
          case Func::Sinh: return Expr::apply(Func::Cosh, u) * du;
          case Func::Cosh: return Expr::apply(Func::Sinh, u) * du;
        }
      }
    }
    return Expr(0.0);
  }

  std::string_view var_;
  std::unordered_map<const Node*, Expr> memo_;
  std::unordered_map<const Node*, bool> dep_;
};

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) { return Differentiator(var)(e); }

Expr differentiate(const Expr& e, std::string_view var, std::span<const std::string> known) {
  if (std::find(known.begin(), known.end(), var) == known.end())
    throw UnboundVariable("unknown variable '" + std::string(var) + "'");
  return differentiate(e, var);
}

double evaluate(const Expr& e, const std::map<std::string, double>& point) {
  const std::vector<std::string> vars = free_variables(e);
  std::vector<double> x;
  x.reserve(vars.size());
  for (const auto& v : vars) {
    auto it = point.find(v);
    if (it == point.end()) throw UnboundVariable("unbound variable '" + v + "'");
    x.push_back(it->second);
  }
  const Expr one[] = {e};
  return Compiled(one, vars).eval(x)[0];
}

// ── matrices ──

namespace {

Expr det_rec(const Matrix& m, std::vector<std::size_t>& rows, std::vector<std::size_t>& cols) {
  const std::size_t n = rows.size();
  if (n == 1) return m[rows[0]][cols[0]];
  if (n == 2)
    return m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
  const std::size_t r = rows.front();
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < n; ++k) {
    const Expr& a = m[r][cols[k]];
    if (a.is_zero()) continue;
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    Expr minor = det_rec(m, sub_rows, sub_cols);
    terms.push_back((k % 2 == 0 ? a : -a) * minor);
  }
  return sum(terms);
}

Expr cofactor(const Matrix& m, std::size_t i, std::size_t j) {
  const std::size_t n = m.size();
  if (n == 1) return Expr(1.0);
  std::vector<std::size_t> rows, cols;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) rows.push_back(k);
    if (k != j) cols.push_back(k);
  }
  Expr minor = det_rec(m, rows, cols);
  return ((i + j) % 2 == 0) ? minor : -minor;
}

}  // namespace

Expr determinant(const Matrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
  if (n == 0) return Expr(1.0);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto cols = idx;
  return det_rec(m, idx, cols);
}

Matrix matrix_inverse_sym(const Matrix& m) {
  const Expr det = simplify_basic(determinant(m));
  if (det.is_zero()) throw SingularMatrix("determinant simplifies to 0");
  const Expr inv_det = pow(det, Rational(-1));
  const std::size_t n = m.size();
  Matrix out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      // symmetric input: adj(m)_ij = cofactor(j, i) = cofactor(i, j)
      out[i][j] = simplify_basic(cofactor(m, j, i) * inv_det);
      out[j][i] = out[i][j];
    }
  return out;
}

}  // namespace nsolit::expr
