#include "nsolit/hierarchy.hpp"

#include <algorithm>
#include <cmath>

namespace nsolit::hier {

VField apply_D(const SpectralOps& ops, const VField& f, int order) { return ops.D(f, order); }

VField apply_Dinv(const SpectralOps& ops, const VField& f) { return ops.Dinv(f); }

VField op_J(const SpectralOps& ops, const VField& v, const VField& w) {
  v.require_grid(w);
  return ops.D(w) + scale(ops.Dinv(dot(v, w)), v);
}

namespace {

// (a ^ b)_{jk} = a_j b_k - b_j a_k, stored as component j*p + k.
VField wedge(const VField& a, const VField& b) {
  const std::size_t p = a.dim(), n = a.points();
  VField r(n, p * p, a.length());
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t i = 0; i < n; ++i) r(j * p + k, i) = a(j, i) * b(k, i) - b(j, i) * a(k, i);
  return r;
}

// (v _| A)_k = sum_j v_j A_{jk}
VField contract(const VField& v, const VField& A) {
  const std::size_t p = v.dim(), n = v.points();
  VField r(n, p, v.length());
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t i = 0; i < n; ++i) r(k, i) += v(j, i) * A(j * p + k, i);
  return r;
}

VField maybe_dealias(const SpectralOps& ops, VField f, bool on) { return on ? ops.dealiased(std::move(f)) : f; }

VField closed_flow(const SpectralOps& ops, int k, const VField& v, K2Form form, bool dl) {
  if (k == 0) return ops.D(v);
  const VField v1 = ops.D(v);
  const VField v2 = ops.D(v, 2);
  const VField v3 = ops.D(v, 3);
  const VField vv = norm2(v);
  if (k == 1) return v3 + 1.5 * maybe_dealias(ops, scale(vv, v1), dl);
  if (k != 2) throw InvalidArgument("flow index must be 0, 1 or 2");
  const VField v5 = ops.D(v, 5);
  const VField v1v1 = norm2(v1);
  if (form == K2Form::Recursion) {
    VField nl = 2.5 * scale(vv, v3);
    nl += 5.0 * scale(dot(v, v1), v2);
    nl += 5.0 * scale(dot(v, v2), v1);
    nl += 2.5 * scale(v1v1, v1);
    nl += 1.875 * scale(mul(vv, vv), v1);
    return v5 + maybe_dealias(ops, std::move(nl), dl);
  }
  const VField vv_ll = ops.D(maybe_dealias(ops, vv, dl), 2);
  VField coeff = vv_ll + v1v1 + 0.75 * mul(vv, vv);
  VField nl = 2.5 * scale(coeff, v1) - 0.5 * scale(v1v1, v);
  return v5 + 2.5 * ops.D(maybe_dealias(ops, scale(vv, v2), dl)) + maybe_dealias(ops, std::move(nl), dl);
}

double quadrature(const VField& density) {
  double s = 0.0;
  for (double x : density.comp(0)) s += x;
  return s * density.spacing();
}

}  // namespace

VField op_H(const SpectralOps& ops, const VField& v, const VField& w) {
  v.require_grid(w);
  return ops.D(w) + contract(v, ops.Dinv(wedge(v, w)));
}

VField recursion_R(const SpectralOps& ops, const VField& v, const VField& w) {
  return op_H(ops, v, op_J(ops, v, w));
}

VField recursion_R_expanded(const SpectralOps& ops, const VField& v, const VField& w) {
  v.require_grid(w);
  const VField v1 = ops.D(v);
  return ops.D(w, 2) + scale(norm2(v), w) + scale(ops.Dinv(dot(v, w)), v1) - contract(v, ops.Dinv(wedge(v1, w)));
}

VField flow_rhs(const SpectralOps& ops, int k, const VField& v, HierarchyConst c, K2Form form, bool dealias) {
  if (k < 0 || k > 2) throw InvalidArgument("flow index must be 0, 1 or 2");
  VField r = closed_flow(ops, k, v, form, dealias);
  if (k >= 1 && c.kappa != 0.0) r -= c.kappa * closed_flow(ops, k - 1, v, form, dealias);
  return r;
}

double hamiltonian(const SpectralOps& ops, int k, const VField& v, H2Variant variant) {
  const VField vv = norm2(v);
  switch (k) {
    case 0:
      return 0.5 * quadrature(vv);
    case 1: {
      const VField v1v1 = norm2(ops.D(v));
      return quadrature(-0.5 * v1v1 + 0.125 * mul(vv, vv));
    }
    case 2: {
      const VField v1 = ops.D(v);
      const VField v1v1 = norm2(v1);
      const VField cross = dot(v, v1);
      const VField q = variant == H2Variant::SquaredCross ? mul(cross, cross) : cross;
      VField d = 0.5 * norm2(ops.D(v, 2));
      d -= 0.75 * mul(vv, v1v1);
      d -= 0.5 * q;
      d += (1.0 / 16.0) * mul(vv, mul(vv, vv));
      return quadrature(d);
    }
    default:
      throw InvalidArgument("Hamiltonian index must be 0, 1 or 2");
  }
}

VField sg_rhs(const VField& e_perp, const VField& e_perp_l) {
  e_perp.require_grid(e_perp_l);
  const VField ee = norm2(e_perp);
  for (std::size_t j = 0; j < ee.points(); ++j)
    if (!(ee(0, j) < 1.0))
      throw DomainError("|e_perp| >= 1 at l=" + std::to_string(ee.l(j)));
  return -1.0 * e_perp;
}

VField sg_aux(const SpectralOps& ops, const VField& e_perp) {
  const VField el = ops.D(e_perp);
  (void)sg_rhs(e_perp, el);
  const VField factor = map(norm2(e_perp), [](double x) { return 1.0 / std::sqrt(1.0 - x); });
  return scale(factor, el);
}

SgFrame sg_recover(const SpectralOps& ops, const VField& w, std::span<const double> e_perp_edge) {
  const std::size_t p = w.dim(), n = w.points();
  if (e_perp_edge.size() != p) throw DimensionMismatch("edge value has wrong dimension");
  double edge2 = 0.0;
  for (double x : e_perp_edge) edge2 += x * x;
  if (!(edge2 < 1.0)) throw DomainError("|e_perp| >= 1 at the grid edge");
  const double par_edge = std::sqrt(1.0 - edge2);

  SgFrame f{VField(n, 1, w.length()), VField(n, p, w.length()), 0};
  std::fill(f.e_par.data().begin(), f.e_par.data().end(), par_edge);
  for (std::size_t c = 0; c < p; ++c) std::fill(f.e_perp.comp(c).begin(), f.e_perp.comp(c).end(), e_perp_edge[c]);

  std::vector<double> buf(n);
  for (int it = 1; it <= 50; ++it) {
    const VField src_perp = scale(f.e_par, w);
    const VField src_par = dot(w, f.e_perp);
    VField perp(n, p, w.length());
    VField par(n, 1, w.length());
    for (std::size_t c = 0; c < p; ++c) {
      ops.antiderivative_projected(src_perp.comp(c), perp.comp(c));
      for (double& x : perp.comp(c)) x += e_perp_edge[c];
    }
    ops.antiderivative_projected(src_par.comp(0), buf);
    for (std::size_t j = 0; j < n; ++j) par(0, j) = par_edge - buf[j];

    const double delta = std::max(max_abs_diff(perp, f.e_perp), max_abs_diff(par, f.e_par));
    f.e_perp = std::move(perp);
    f.e_par = std::move(par);
    f.iterations = it;
    if (!std::isfinite(delta)) break;
    if (delta < 1e-12) {
      const VField src = scale(f.e_par, w);
      for (std::size_t c = 0; c < p; ++c) {
        double inf = 0.0;
        for (double x : src.comp(c)) inf = std::max(inf, std::abs(x));
        const double m = SpectralOps::mean(src.comp(c));
        if (!(std::abs(m) <= 1e-8 * std::max(1.0, inf)))
          throw NonzeroMean("e_par w has mean " + std::to_string(m) + "; e_perp is not periodic");
      }
      return f;
    }
  }
  throw IntegrationFailure(IntegrationFailure::Kind::Convergence, 0.0, "sine-Gordon frame recovery did not converge");
}

VField minus1_rhs(const VField& v, const VField& v_tau, HierarchyConst c) {
  v.require_grid(v_tau);
  const double k2 = c.kappa * c.kappa;
  VField root = norm2(v_tau);
  for (std::size_t j = 0; j < root.points(); ++j) {
    const double d = k2 - root(0, j);
    if (d < -1e-14 * std::max(1.0, k2))
      throw DomainError("|v_tau| exceeds |kappa| at l=" + std::to_string(root.l(j)));
    root(0, j) = std::sqrt(std::max(d, 0.0));
  }
  return -1.0 * scale(root, v);
}

VField minus1_residual(const SpectralOps& ops, const VField& v, const VField& v_tau, HierarchyConst c) {
  return ops.D(v_tau) - minus1_rhs(v, v_tau, c);
}

VField conservation_residual(const SpectralOps& ops, const VField& e_par, const VField& e_perp) {
  e_par.require_grid(e_perp, false);
  return ops.D(mul(e_par, e_par) + norm2(e_perp));
}

}  // namespace nsolit::hier
