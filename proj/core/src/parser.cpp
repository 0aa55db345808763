// Expression DSL:
//
//   expr     = term { ("+" | "-") term } ;
//   term     = unary { ("*" | "/") unary } ;
//   unary    = ("-" | "+") unary | power ;
//   power    = primary [ "^" exponent ] ;
//   exponent = ["-"] integer | "(" ["-"] integer [ "/" integer ] ")" ;
//   primary  = number | "pi" | name | func "(" expr ")" | "(" expr ")" ;
//   func     = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt" | "sinh" | "cosh" ;
//
// Sums and products are flattened per precedence level, subtraction and
// negation fold into a leading constant factor, so unparse(parse(s)) parses
// back to the same tree.

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "nsolit/expr.hpp"

namespace nsolit::expr {

namespace {

std::optional<Func> lookup_func(std::string_view name) {
  static constexpr std::pair<std::string_view, Func> table[] = {
      {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
      {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
      {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
  };
  for (const auto& [n, f] : table)
    if (n == name) return f;
  return std::nullopt;
}

Expr negate(const Expr& t) {
  if (t.is_constant()) return Expr(-t.value());
  if (t.kind() == Kind::Product) {
    std::vector<Expr> f = t.args();
    if (f.front().is_constant())
      f.front() = Expr(-f.front().value());
    else
      f.insert(f.begin(), Expr(-1.0));
    return Expr::raw_product(std::move(f));
  }
  return Expr::raw_product({Expr(-1.0), t});
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars) : s_(text), vars_(vars) {}

  Expr run() {
    Expr e = expr();
    ws();
    if (pos_ < s_.size()) {
      if (s_[pos_] == ',') fail(ParseError::Kind::Arity, "unexpected ','");
      fail(ParseError::Kind::Syntax, "unexpected character");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind k, const std::string& msg) const {
    throw ParseError(k, pos_, msg);
  }

  void ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    std::vector<Expr> terms;
    auto push = [&](const Expr& t) {
      if (t.kind() == Kind::Sum)
        terms.insert(terms.end(), t.args().begin(), t.args().end());
      else
        terms.push_back(t);
    };
    push(term());
    for (;;) {
      if (accept('+'))
        push(term());
      else if (accept('-'))
        push(negate(term()));
      else
        break;
    }
    return Expr::raw_sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors;
    auto push = [&](const Expr& f) {
      if (f.kind() == Kind::Product)
        factors.insert(factors.end(), f.args().begin(), f.args().end());
      else
        factors.push_back(f);
    };
    push(unary());
    for (;;) {
      if (accept('*'))
        push(unary());
      else if (accept('/'))
        push(Expr::power(unary(), Rational(-1)));
      else
        break;
    }
    return Expr::raw_product(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return negate(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      const Rational r = exponent();
      ws();
      if (pos_ < s_.size() && s_[pos_] == '^') fail(ParseError::Kind::Syntax, "chained '^' needs parentheses");
      return Expr::power(base, r);
    }
    return base;
  }

  long long integer() {
    ws();
    const std::size_t start = pos_;
    long long v = 0;
    auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail(ParseError::Kind::Syntax, "expected integer exponent");
    pos_ = static_cast<std::size_t>(p - s_.data());
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      pos_ = start;
      fail(ParseError::Kind::Syntax, "exponent must be rational");
    }
    return v;
  }

  Rational exponent() {
    if (accept('(')) {
      const bool neg = accept('-');
      long long n = integer();
      long long d = 1;
      if (accept('/')) {
        d = integer();
        if (d == 0) fail(ParseError::Kind::Syntax, "zero denominator");
      }
      if (!accept(')')) fail(ParseError::Kind::Syntax, "expected ')'");
      return Rational(neg ? -n : n, d);
    }
    const bool neg = accept('-');
    const long long n = integer();
    return Rational(neg ? -n : n);
  }

  Expr number() {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    // from_chars would accept "inf"/"nan"; the grammar only admits digits
    const char* p = first;
    while (p < last && std::isdigit(static_cast<unsigned char>(*p))) ++p;
    if (p < last && *p == '.') {
      ++p;
      while (p < last && std::isdigit(static_cast<unsigned char>(*p))) ++p;
    }
    if (p < last && (*p == 'e' || *p == 'E')) {
      const char* q = p + 1;
      if (q < last && (*q == '+' || *q == '-')) ++q;
      if (q < last && std::isdigit(static_cast<unsigned char>(*q))) {
        p = q;
        while (p < last && std::isdigit(static_cast<unsigned char>(*p))) ++p;
      }
    }
    double v = 0.0;
    auto [end, ec] = std::from_chars(first, p, v);
    if (ec != std::errc() || end != p) fail(ParseError::Kind::Syntax, "malformed number");
    pos_ += static_cast<std::size_t>(p - first);
    return Expr(v);
  }

  Expr primary() {
    ws();
    if (pos_ >= s_.size()) fail(ParseError::Kind::Syntax, "unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail(ParseError::Kind::Syntax, "expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (auto f = lookup_func(name)) {
        if (!accept('(')) {
          pos_ = start;
          fail(ParseError::Kind::Arity, "function '" + std::string(name) + "' needs one argument");
        }
        Expr arg = expr();
        ws();
        if (pos_ < s_.size() && s_[pos_] == ',')
          fail(ParseError::Kind::Arity, "function '" + std::string(name) + "' takes one argument");
        if (!accept(')')) fail(ParseError::Kind::Syntax, "expected ')'");
        return Expr::apply(*f, arg);
      }
      for (const auto& v : vars_)
        if (v == name) return Expr::variable(std::string(name));
      if (name == "pi") return Expr(std::numbers::pi);
      pos_ = start;
      fail(ParseError::Kind::UnknownVariable, "unknown identifier '" + std::string(name) + "'");
    }
    fail(ParseError::Kind::Syntax, "unexpected character");
  }

  std::string_view s_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

// ── unparse ──

enum Prec { kSum = 1, kProduct = 2, kPower = 3 };

std::string number_text(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void print(const Expr& e, int ctx, std::string& out);

void print_rational_exponent(Rational r, std::string& out) {
  if (r.is_integer() && r.num >= 0) {
    out += "^" + std::to_string(r.num);
  } else if (r.is_integer()) {
    out += "^(" + std::to_string(r.num) + ")";
  } else {
    out += "^(" + std::to_string(r.num) + "/" + std::to_string(r.den) + ")";
  }
}

void print_product_args(const std::vector<Expr>& f, std::size_t from, std::string& out) {
  for (std::size_t i = from; i < f.size(); ++i) {
    if (i > from) out += "*";
    print(f[i], kProduct + 1, out);
  }
}

// Prints -t for a term t that is a negative constant or a product led by one.
void print_negated(const Expr& t, std::string& out) {
  if (t.is_constant()) {
    out += number_text(-t.value());
    return;
  }
  const auto& f = t.args();
  const double c = -f.front().value();
  if (c == 1.0) {
    if (f.size() == 2)
      print(f[1], kProduct + 1, out);
    else
      print_product_args(f, 1, out);
    return;
  }
  out += number_text(c);
  out += "*";
  print_product_args(f, 1, out);
}

bool negative_led(const Expr& t) {
  if (t.is_constant()) return t.value() < 0;
  return t.kind() == Kind::Product && t.args().size() >= 2 && t.args().front().is_constant() &&
         t.args().front().value() < 0;
}

void print(const Expr& e, int ctx, std::string& out) {
  switch (e.kind()) {
    case Kind::Constant: {
      const double v = e.value();
      if (v < 0 && ctx > kSum) {
        out += "(" + number_text(v) + ")";
      } else {
        out += number_text(v);
      }
      return;
    }
    case Kind::Variable: out += e.name(); return;
    case Kind::Function:
      out += func_name(e.func());
      out += "(";
      print(e.args()[0], 0, out);
      out += ")";
      return;
    case Kind::Power: {
      const Expr& b = e.args()[0];
      const bool atom = b.kind() == Kind::Variable || b.kind() == Kind::Function ||
                        (b.is_constant() && b.value() >= 0);
      if (atom) {
        print(b, kPower, out);
      } else {
        out += "(";
        print(b, 0, out);
        out += ")";
      }
      print_rational_exponent(e.exponent(), out);
      return;
    }
    case Kind::Product: {
      const bool paren = ctx > kProduct || (ctx == kProduct);
      if (paren) out += "(";
      const auto& f = e.args();
      if (negative_led(e) && f.front().value() == -1.0) {
        out += "-";
        if (f.size() == 2)
          print(f[1], kProduct + 1, out);
        else
          print_product_args(f, 1, out);
      } else {
        if (f.front().is_constant() && f.front().value() < 0)
          out += number_text(f.front().value());
        else
          print(f.front(), kProduct + 1, out);
        if (f.size() > 1) {
          out += "*";
          print_product_args(f, 1, out);
        }
      }
      if (paren) out += ")";
      return;
    }
    case Kind::Sum: {
      const bool paren = ctx >= kSum;
      if (paren) out += "(";
      const auto& t = e.args();
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i == 0) {
          print(t[i], kSum - 1, out);
        } else if (negative_led(t[i])) {
          out += " - ";
          print_negated(t[i], out);
        } else {
          out += " + ";
          print(t[i], kSum - 1, out);
        }
      }
      if (paren) out += ")";
      return;
    }
  }
}

}  // namespace

Expr parse_expr(std::string_view text, std::span<const std::string> allowed_vars) {
  return Parser(text, allowed_vars).run();
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

}  // namespace nsolit::expr
