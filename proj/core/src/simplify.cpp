#include <cmath>
#include <map>
#include <optional>
#include <unordered_map>

#include "nsolit/expr.hpp"

namespace nsolit::expr {

namespace {

// Products of sums are distributed only while the result stays this small.
constexpr std::size_t kExpandLimit = 64;

struct Less {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

double eval_func(Func f, double x) {
  switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan: return std::tan(x);
    case Func::Exp: return std::exp(x);
    case Func::Log:
      if (x <= 0) throw DomainError("log of non-positive argument");
      return std::log(x);
    case Func::Sqrt:
      if (x < 0) throw DomainError("sqrt of negative argument");
      return std::sqrt(x);
    case Func::Sinh: return std::sinh(x);
    case Func::Cosh: return std::cosh(x);
  }
  return 0.0;
}

// Canonical key for a coefficient-free monomial.
Expr make_monomial(std::vector<Expr> factors) {
  std::sort(factors.begin(), factors.end(), Less{});
  if (factors.empty()) return Expr(1.0);
  return Expr::raw_product(std::move(factors));
}

std::vector<Expr> factors_of(const Expr& m) {
  if (m.is_constant(1.0)) return {};
  if (m.kind() == Kind::Product) return m.args();
  return {m};
}

bool is_trig_square(const Expr& f, Func which) {
  return f.kind() == Kind::Power && f.exponent() == Rational(2) &&
         f.args()[0].kind() == Kind::Function && f.args()[0].func() == which;
}

class Simplifier {
 public:
  Expr run(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr r;
    switch (e.kind()) {
      case Kind::Constant:
      case Kind::Variable: r = e; break;
      case Kind::Function: r = func(e.func(), run(e.args()[0])); break;
      case Kind::Power: r = power(run(e.args()[0]), e.exponent()); break;
      case Kind::Product: {
        std::vector<Expr> f;
        for (const Expr& a : e.args()) f.push_back(run(a));
        r = product(std::move(f));
        break;
      }
      case Kind::Sum: {
        std::vector<Expr> t;
        for (const Expr& a : e.args()) t.push_back(run(a));
        r = sum(std::move(t));
        break;
      }
    }
    memo_.emplace(e.get(), r);
    return r;
  }

 private:
  Expr func(Func f, const Expr& a) {
    if (f == Func::Sqrt) return power(a, Rational(1, 2));
    if (a.is_constant()) {
      try {
        const double v = eval_func(f, a.value());
        if (std::isfinite(v)) return Expr(v);
      } catch (const DomainError&) {
      }
    }
    if (f == Func::Log && a.kind() == Kind::Function && a.func() == Func::Exp) return a.args()[0];
    return Expr::apply(f, a);
  }

  Expr power(const Expr& b, Rational r) {
    if (r.num == 0) return Expr(1.0);
    if (r == Rational(1)) return b;
    if (b.is_constant()) {
      try {
        const double v = rational_pow(b.value(), r);
        if (std::isfinite(v)) return Expr(v);
      } catch (const DomainError&) {
      }
      return Expr::power(b, r);
    }
    if (b.kind() == Kind::Power && r.is_integer()) return power(b.args()[0], b.exponent() * r);
    if (b.kind() == Kind::Product && r.is_integer()) {
      std::vector<Expr> f;
      for (const Expr& a : b.args()) f.push_back(power(a, r));
      return product(std::move(f));
    }
    if (b.kind() == Kind::Sum && r.is_integer() && r.num >= 2) {
      double terms = 1.0;
      for (long long i = 0; i < r.num; ++i) terms *= double(b.args().size());
      if (terms <= double(kExpandLimit)) return distribute(1.0, std::vector<Expr>(std::size_t(r.num), b));
    }
    return Expr::power(b, r);
  }

  Expr product(std::vector<Expr> in) {
    double c = 1.0;
    std::map<Expr, Rational, Less> powers;
    auto add = [&](const Expr& f) {
      if (f.is_constant()) {
        c *= f.value();
      } else if (f.kind() == Kind::Power) {
        auto [it, fresh] = powers.try_emplace(f.args()[0], f.exponent());
        if (!fresh) it->second = it->second + f.exponent();
      } else {
        auto [it, fresh] = powers.try_emplace(f, Rational(1));
        if (!fresh) it->second = it->second + Rational(1);
      }
    };
    for (const Expr& f : in) {
      if (f.kind() == Kind::Product)
        for (const Expr& g : f.args()) add(g);
      else
        add(f);
    }
    if (c == 0.0) return Expr(0.0);

    std::vector<Expr> out;
    bool renormalize = false;
    for (const auto& [b, r] : powers) {
      if (r.num == 0) continue;
      Expr p = power(b, r);
      if (p.is_constant() || p.kind() == Kind::Product) renormalize = true;
      out.push_back(p);
    }
    if (renormalize) {
      out.push_back(Expr(c));
      return product(std::move(out));
    }

    std::size_t expanded = 1;
    bool has_sum = false;
    for (const Expr& f : out)
      if (f.kind() == Kind::Sum) {
        has_sum = true;
        expanded *= f.args().size();
      }
    if (has_sum && expanded <= kExpandLimit) return distribute(c, out);

    std::sort(out.begin(), out.end(), Less{});
    if (c != 1.0 || out.empty()) out.insert(out.begin(), Expr(c));
    return Expr::raw_product(std::move(out));
  }

  Expr distribute(double c, const std::vector<Expr>& factors) {
    std::vector<std::vector<Expr>> partial{{Expr(c)}};
    for (const Expr& f : factors) {
      if (f.kind() != Kind::Sum) {
        for (auto& p : partial) p.push_back(f);
        continue;
      }
      std::vector<std::vector<Expr>> next;
      for (const auto& p : partial)
        for (const Expr& t : f.args()) {
          next.push_back(p);
          next.back().push_back(t);
        }
      partial = std::move(next);
    }
    std::vector<Expr> terms;
    for (auto& p : partial) terms.push_back(product(std::move(p)));
    return sum(std::move(terms));
  }

  Expr sum(std::vector<Expr> in) {
    double constant = 0.0;
    std::map<Expr, double, Less> coeff;
    auto add = [&](const Expr& t) {
      if (t.is_constant()) {
        constant += t.value();
        return;
      }
      double k = 1.0;
      Expr m = t;
      if (t.kind() == Kind::Product && t.args().front().is_constant()) {
        k = t.args().front().value();
        m = make_monomial(std::vector<Expr>(t.args().begin() + 1, t.args().end()));
        if (m.is_constant(1.0)) {
          constant += k;
          return;
        }
      }
      coeff[m] += k;
    };
    for (const Expr& t : in) {
      if (t.kind() == Kind::Sum)
        for (const Expr& u : t.args()) add(u);
      else
        add(t);
    }
    contract_pythagoras(coeff, constant);

    std::vector<Expr> out;
    if (constant != 0.0) out.push_back(Expr(constant));
    for (const auto& [m, k] : coeff) {
      if (k == 0.0) continue;
      if (k == 1.0) {
        out.push_back(m);
      } else {
        std::vector<Expr> f{Expr(k)};
        for (const Expr& x : factors_of(m)) f.push_back(x);
        out.push_back(Expr::raw_product(std::move(f)));
      }
    }
    if (out.empty()) return Expr(0.0);
    return Expr::raw_sum(std::move(out));
  }

  // k*R*sin(u)^2 + k*R*cos(u)^2 -> k*R
  static void contract_pythagoras(std::map<Expr, double, Less>& coeff, double& constant) {
    for (;;) {
      std::optional<std::pair<Expr, Expr>> hit;  // (sin key, cos key)
      Expr rest_key;
      for (const auto& [m, k] : coeff) {
        if (k == 0.0 || hit) continue;
        const std::vector<Expr> f = factors_of(m);
        for (std::size_t i = 0; i < f.size() && !hit; ++i) {
          if (!is_trig_square(f[i], Func::Sin)) continue;
          std::vector<Expr> rest;
          for (std::size_t j = 0; j < f.size(); ++j)
            if (j != i) rest.push_back(f[j]);
          std::vector<Expr> partner = rest;
          partner.push_back(Expr::power(Expr::apply(Func::Cos, f[i].args()[0].args()[0]), Rational(2)));
          auto jt = coeff.find(make_monomial(partner));
          if (jt == coeff.end() || jt->second != k) continue;
          hit.emplace(m, jt->first);
          rest_key = make_monomial(rest);
        }
      }
      if (!hit) return;
      const double k = coeff[hit->first];
      coeff.erase(hit->first);
      coeff.erase(hit->second);
      if (rest_key.is_constant(1.0))
        constant += k;
      else
        coeff[rest_key] += k;
    }
  }

  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr simplify_basic(const Expr& e) {
  Expr cur = Simplifier().run(e);
  for (int pass = 0; pass < 10; ++pass) {
    Expr next = Simplifier().run(cur);
    if (structurally_equal(next, cur)) return cur;
    cur = next;
  }
  return cur;
}

}  // namespace nsolit::expr
