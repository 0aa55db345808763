#pragma once

#include <span>
#include <vector>

#include "nsolit/field.hpp"
#include "nsolit/spectral.hpp"

namespace nsolit::hier {

/// Constant scalar curvature entering the flow recursion.
struct HierarchyConst {
  double kappa = 0.0;
};

[[nodiscard]] VField apply_D(const SpectralOps& ops, const VField& f, int order = 1);
/// Anchored antiderivative; throws NonzeroMean for a component with nonzero mean.
[[nodiscard]] VField apply_Dinv(const SpectralOps& ops, const VField& f);

/// J w = D w + D^-1(v.w) v
[[nodiscard]] VField op_J(const SpectralOps& ops, const VField& v, const VField& w);
/// (H w)_k = D w_k + sum_j v_j D^-1(v_j w_k - w_j v_k)
[[nodiscard]] VField op_H(const SpectralOps& ops, const VField& v, const VField& w);
/// R w = H(J w)
[[nodiscard]] VField recursion_R(const SpectralOps& ops, const VField& v, const VField& w);
/// D^2 w + |v|^2 w + D^-1(v.w) v_l - v _| D^-1(v_l ^ w)
[[nodiscard]] VField recursion_R_expanded(const SpectralOps& ops, const VField& v, const VField& w);

/// Fifth-order flow. `Recursion` is R applied to the k=1 flow, which is what
/// the commuting hierarchy requires; `Printed` keeps the other coefficient set.
enum class K2Form { Recursion, Printed };

/// Right-hand side of flow k in {0,1,2}, minus kappa times flow k-1 for k >= 1.
/// Nonlinear products are dealiased when `dealias` is set.
[[nodiscard]] VField flow_rhs(const SpectralOps& ops, int k, const VField& v, HierarchyConst c = {},
                              K2Form form = K2Form::Recursion, bool dealias = true);

/// Cross term of the fourth Hamiltonian: (v.v_l)^2 or the linear (v.v_l).
enum class H2Variant { SquaredCross, LinearCross };

/// Trapezoid quadrature of the k-th Hamiltonian density.
[[nodiscard]] double hamiltonian(const SpectralOps& ops, int k, const VField& v,
                                 H2Variant variant = H2Variant::SquaredCross);

/// Sine-Gordon: tau-derivative of w = (1-|e|^2)^{-1/2} e_l, which is -e.
/// Throws DomainError where |e| >= 1.
[[nodiscard]] VField sg_rhs(const VField& e_perp, const VField& e_perp_l);
/// w = (1-|e|^2)^{-1/2} e_l
[[nodiscard]] VField sg_aux(const SpectralOps& ops, const VField& e_perp);

struct SgFrame {
  VField e_par;
  VField e_perp;
  int iterations = 0;
};

/// Inverts w -> e_perp given the frame at the left grid edge (|e_perp(l0)| < 1,
/// e_par(l0) = sqrt(1 - |e_perp(l0)|^2)). Solves e_perp_l = e_par w,
/// e_par_l = -w.e_perp by Picard iteration to 1e-12 in at most 50 steps.
/// Throws IntegrationFailure(Convergence) on divergence and NonzeroMean if
/// e_par w does not integrate to a periodic field.
[[nodiscard]] SgFrame sg_recover(const SpectralOps& ops, const VField& w, std::span<const double> e_perp_edge);

/// Closure of the -1 flow: -sqrt(kappa^2 - |v_tau|^2) v, the value D(v_tau) must take.
/// Throws DomainError where |v_tau| > |kappa|.
[[nodiscard]] VField minus1_rhs(const VField& v, const VField& v_tau, HierarchyConst c = {1.0});
/// D(v_tau) - minus1_rhs(v, v_tau, c)
[[nodiscard]] VField minus1_residual(const SpectralOps& ops, const VField& v, const VField& v_tau,
                                     HierarchyConst c = {1.0});

/// D(e_par^2 + |e_perp|^2)
[[nodiscard]] VField conservation_residual(const SpectralOps& ops, const VField& e_par, const VField& e_perp);

}  // namespace nsolit::hier
