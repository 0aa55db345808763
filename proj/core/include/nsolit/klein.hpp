#pragma once

#include <Eigen/Dense>
#include <span>

#include "nsolit/field.hpp"
#include "nsolit/spectral.hpp"

namespace nsolit::klein {

using hier::SpectralOps;
using hier::VField;

/// Skew-symmetric matrix; entries are only set in antisymmetric pairs.
class SoMatrix {
 public:
  explicit SoMatrix(std::size_t size) : m_(Eigen::MatrixXd::Zero(Eigen::Index(size), Eigen::Index(size))) {}
  /// From the strict upper triangle of `upper`; the rest is ignored.
  static SoMatrix from_upper(const Eigen::MatrixXd& upper);

  void set(std::size_t i, std::size_t j, double x);
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return m_(Eigen::Index(i), Eigen::Index(j)); }
  [[nodiscard]] std::size_t size() const { return std::size_t(m_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

/// E_{ab} = e_a e_b^T - e_b e_a^T
[[nodiscard]] SoMatrix basis(std::size_t a, std::size_t b, std::size_t size);
[[nodiscard]] Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// (p+1)x(p+1) with first row (0 | 1, 0, ..., 0).
[[nodiscard]] SoMatrix embed_eX(std::size_t p);
/// e_par E_{01} + sum_k e_perp_k E_{0,2+k}; size q+2.
[[nodiscard]] SoMatrix embed_flow(double e_par, std::span<const double> e_perp);
/// sum_k v_k E_{1,2+k} plus the q x q block Theta at [2.., 2..]; Theta must be skew.
[[nodiscard]] SoMatrix embed_conn(std::span<const double> v, const Eigen::MatrixXd& theta);
/// sum_j u_j E_{0,1+j}: the translational slot, size u.size()+1.
[[nodiscard]] SoMatrix embed_p(std::span<const double> u);

/// Curve-flow data on a periodic grid. Theta has q*q components (row-major) and is skew pointwise.
struct FrameFields {
  VField v;
  VField varpi;
  VField e_par;
  VField e_perp;
  VField theta;

  /// All-zero fields with q components on the given grid.
  static FrameFields zero(std::size_t points, std::size_t q, double length);
  [[nodiscard]] std::size_t q() const { return v.dim(); }
  /// Throws DimensionMismatch on grid or shape disagreement, DomainError if Theta is not skew.
  void validate() const;
};

struct ResidualNorms {
  double max = 0.0;
  double mean = 0.0;
};

struct StructureResiduals {
  VField r1;  // D e_par + v.e_perp
  VField r2;  // varpi - e_par v + D e_perp
  VField r3;  // D varpi - v_tau + v _| Theta - e_perp
  VField r4;  // D Theta - (v (x) varpi - varpi (x) v)
  ResidualNorms n1, n2, n3, n4;
};

/// Component form of the torsion and curvature equations. `v_tau` is the flow-time derivative of v.
[[nodiscard]] StructureResiduals structure_residuals(const SpectralOps& ops, const FrameFields& f, const VField& v_tau);

/// The same residuals read off the matrix equations
///   D e_Y + [G_X, e_Y] - [G_Y, e_X] = 0,  D_l G_Y - D_tau G_X + [G_X, G_Y] + [e_X, e_Y] = 0
/// assembled pointwise from the embed_* matrices.
[[nodiscard]] StructureResiduals structure_residuals_matrix(const SpectralOps& ops, const FrameFields& f,
                                                            const VField& v_tau);

/// e_par = c - D^-1(v.e_perp), varpi = -D e_perp + e_par v, Theta = D^-1(v (x) varpi - varpi (x) v).
/// Throws NonzeroMean when an integrand is not mean-zero.
[[nodiscard]] FrameFields reconstruct_parallel(const SpectralOps& ops, const VField& v, const VField& e_perp,
                                               double e_par_edge = 0.0);

}  // namespace nsolit::klein
