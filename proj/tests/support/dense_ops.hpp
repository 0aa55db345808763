#pragma once

#include <Eigen/Dense>

#include "nsolit/field.hpp"

namespace nsolit::oracle {

/// Dense Fourier operators built without FFTs: the cotangent differentiation
/// matrix, and the anchored antiderivative as its pseudo-inverse with row 0
/// subtracted.
struct DenseOps {
  DenseOps(std::size_t points, double length);
  Eigen::MatrixXd D;
  Eigen::MatrixXd Dinv;
  std::size_t n;
};

/// Block matrices of J and H at v, acting on the stacked components of w.
[[nodiscard]] Eigen::MatrixXd dense_J(const DenseOps& ops, const hier::VField& v);
[[nodiscard]] Eigen::MatrixXd dense_H(const DenseOps& ops, const hier::VField& v);

[[nodiscard]] Eigen::VectorXd stack(const hier::VField& f);
[[nodiscard]] hier::VField unstack(const Eigen::VectorXd& x, const hier::VField& like);

}  // namespace nsolit::oracle
