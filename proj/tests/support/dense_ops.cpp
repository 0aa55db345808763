#include "dense_ops.hpp"

#include <cmath>
#include <numbers>

namespace nsolit::oracle {

using Eigen::Index;

DenseOps::DenseOps(std::size_t points, double length) : n(points) {
  const Index N = Index(points);
  const double h = 2.0 * std::numbers::pi / double(points);
  const double scale = 2.0 * std::numbers::pi / length;
  D = Eigen::MatrixXd::Zero(N, N);
  for (Index j = 0; j < N; ++j)
    for (Index k = 0; k < N; ++k) {
      if (j == k) continue;
      const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      D(j, k) = scale * 0.5 * sign / std::tan(0.5 * double(j - k) * h);
    }
  const Eigen::MatrixXd pinv = D.completeOrthogonalDecomposition().pseudoInverse();
  Dinv = pinv;
  for (Index j = 0; j < N; ++j) Dinv.row(j) -= pinv.row(0);
}

Eigen::VectorXd stack(const hier::VField& f) {
  Eigen::VectorXd x(Index(f.data().size()));
  for (std::size_t i = 0; i < f.data().size(); ++i) x(Index(i)) = f.data()[i];
  return x;
}

hier::VField unstack(const Eigen::VectorXd& x, const hier::VField& like) {
  hier::VField f(like.points(), like.dim(), like.length());
  for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] = x(Index(i));
  return f;
}

namespace {

Eigen::MatrixXd diag(const hier::VField& v, std::size_t c) {
  Eigen::VectorXd d(Index(v.points()));
  for (std::size_t j = 0; j < v.points(); ++j) d(Index(j)) = v(c, j);
  return d.asDiagonal();
}

}  // namespace

Eigen::MatrixXd dense_J(const DenseOps& ops, const hier::VField& v) {
  const std::size_t p = v.dim();
  const Index N = Index(ops.n);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N * Index(p), N * Index(p));
  for (std::size_t k = 0; k < p; ++k) {
    J.block(Index(k) * N, Index(k) * N, N, N) += ops.D;
    for (std::size_t j = 0; j < p; ++j)
      J.block(Index(k) * N, Index(j) * N, N, N) += diag(v, k) * ops.Dinv * diag(v, j);
  }
  return J;
}

Eigen::MatrixXd dense_H(const DenseOps& ops, const hier::VField& v) {
  const std::size_t p = v.dim();
  const Index N = Index(ops.n);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N * Index(p), N * Index(p));
  for (std::size_t k = 0; k < p; ++k) {
    H.block(Index(k) * N, Index(k) * N, N, N) += ops.D;
    for (std::size_t j = 0; j < p; ++j) {
      H.block(Index(k) * N, Index(k) * N, N, N) += diag(v, j) * ops.Dinv * diag(v, j);
      H.block(Index(k) * N, Index(j) * N, N, N) -= diag(v, j) * ops.Dinv * diag(v, k);
    }
  }
  return H;
}

}  // namespace nsolit::oracle
