#include <cmath>
#include <unordered_map>

#include "nsolit/expr.hpp"

namespace nsolit::expr {

namespace {

struct Key {
  Expr e;
  bool operator==(const Key& o) const { return structurally_equal(e, o.e); }
};
struct KeyHash {
  std::size_t operator()(const Key& k) const { return k.e.hash(); }
};

}  // namespace

Compiled::Compiled(std::span<const Expr> outputs, std::span<const std::string> vars)
    : vars_(vars.begin(), vars.end()) {
  std::unordered_map<const Node*, std::uint32_t> by_ptr;
  std::unordered_map<Key, std::uint32_t, KeyHash> by_shape;

  // iterative post-order so deep trees cannot overflow the stack
  auto emit = [&](const Expr& root) -> std::uint32_t {
    std::vector<std::pair<Expr, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [e, expanded] = stack.back();
      stack.pop_back();
      if (by_ptr.count(e.get())) continue;
      if (auto it = by_shape.find(Key{e}); it != by_shape.end()) {
        by_ptr.emplace(e.get(), it->second);
        continue;
      }
      if (!expanded) {
        stack.push_back({e, true});
        for (auto a = e.args().rbegin(); a != e.args().rend(); ++a)
          if (!by_ptr.count(a->get())) stack.push_back({*a, false});
        continue;
      }
      Op op{e.kind(), e.func(), e.value(), e.exponent(), 0, 0};
      if (e.kind() == Kind::Variable) {
        std::uint32_t slot = 0;
        for (; slot < vars_.size(); ++slot)
          if (vars_[slot] == e.name()) break;
        if (slot == vars_.size()) throw UnboundVariable("unbound variable '" + e.name() + "'");
        op.first = slot;
      } else if (!e.args().empty()) {
        op.first = static_cast<std::uint32_t>(arg_.size());
        op.count = static_cast<std::uint32_t>(e.args().size());
        for (const Expr& a : e.args()) arg_.push_back(by_ptr.at(a.get()));
      }
      const auto idx = static_cast<std::uint32_t>(ops_.size());
      ops_.push_back(op);
      by_ptr.emplace(e.get(), idx);
      by_shape.emplace(Key{e}, idx);
    }
    return by_ptr.at(root.get());
  };
  for (const Expr& e : outputs) out_.push_back(emit(e));
}

void Compiled::eval(std::span<const double> x, std::span<double> out) const {
  if (x.size() != vars_.size()) throw DimensionMismatch("evaluation point has wrong arity");
  thread_local std::vector<double> val;
  val.resize(ops_.size());
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op& op = ops_[i];
    const std::uint32_t* a = arg_.data() + op.first;
    double r = 0.0;
    switch (op.kind) {
      case Kind::Constant: r = op.c; break;
      case Kind::Variable: r = x[op.first]; break;
      case Kind::Sum:
        for (std::uint32_t k = 0; k < op.count; ++k) r += val[a[k]];
        break;
      case Kind::Product:
        r = 1.0;
        for (std::uint32_t k = 0; k < op.count; ++k) r *= val[a[k]];
        break;
      case Kind::Power: r = rational_pow(val[a[0]], op.r); break;
      case Kind::Function: {
        const double u = val[a[0]];
        switch (op.func) {
          case Func::Sin: r = std::sin(u); break;
          case Func::Cos: r = std::cos(u); break;
          case Func::Tan: r = std::tan(u); break;
          case Func::Exp: r = std::exp(u); break;
          case Func::Log:
            if (u <= 0) throw DomainError("log of non-positive argument");
            r = std::log(u);
            break;
          case Func::Sqrt:
            if (u < 0) throw DomainError("sqrt of negative argument");
            r = std::sqrt(u);
            break;
          case Func::Sinh: r = std::sinh(u); break;
          case Func::Cosh: r = std::cosh(u); break;
        }
        break;
      }
    }
    val[i] = r;
  }
  for (std::size_t k = 0; k < out_.size(); ++k) out[k] = val[out_[k]];
}

std::vector<double> Compiled::eval(std::span<const double> x) const {
  std::vector<double> out(out_.size());
  eval(x, out);
  return out;
}

}  // namespace nsolit::expr
