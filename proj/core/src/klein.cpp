#include "nsolit/klein.hpp"

#include <cmath>

namespace nsolit::klein {

SoMatrix SoMatrix::from_upper(const Eigen::MatrixXd& upper) {
  if (upper.rows() != upper.cols()) throw DimensionMismatch("matrix must be square");
  SoMatrix m(static_cast<std::size_t>(upper.rows()));
  for (Eigen::Index i = 0; i < upper.rows(); ++i)
    for (Eigen::Index j = i + 1; j < upper.cols(); ++j) m.set(std::size_t(i), std::size_t(j), upper(i, j));
  return m;
}

void SoMatrix::set(std::size_t i, std::size_t j, double x) {
  if (i >= size() || j >= size()) throw DimensionMismatch("index outside matrix");
  if (i == j) {
    if (x != 0.0) throw DomainError("diagonal of a skew matrix must vanish");
    return;
  }
  m_(Eigen::Index(i), Eigen::Index(j)) = x;
  m_(Eigen::Index(j), Eigen::Index(i)) = -x;
}

SoMatrix basis(std::size_t a, std::size_t b, std::size_t size) {
  SoMatrix m(size);
  m.set(a, b, 1.0);
  return m;
}

Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a * b - b * a; }

SoMatrix embed_eX(std::size_t p) {
  if (p < 1) throw InvalidArgument("embed_eX needs p >= 1");
  return basis(0, 1, p + 1);
}

SoMatrix embed_flow(double e_par, std::span<const double> e_perp) {
  SoMatrix m(e_perp.size() + 2);
  m.set(0, 1, e_par);
  for (std::size_t k = 0; k < e_perp.size(); ++k) m.set(0, 2 + k, e_perp[k]);
  return m;
}

SoMatrix embed_conn(std::span<const double> v, const Eigen::MatrixXd& theta) {
  const std::size_t q = v.size();
  if (std::size_t(theta.rows()) != q || std::size_t(theta.cols()) != q)
    throw DimensionMismatch("Theta block does not match v");
  if ((theta + theta.transpose()).cwiseAbs().maxCoeff() > 0.0) throw DomainError("Theta must be skew-symmetric");
  SoMatrix m(q + 2);
  for (std::size_t k = 0; k < q; ++k) m.set(1, 2 + k, v[k]);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j) m.set(2 + i, 2 + j, theta(Eigen::Index(i), Eigen::Index(j)));
  return m;
}

SoMatrix embed_p(std::span<const double> u) {
  SoMatrix m(u.size() + 1);
  for (std::size_t j = 0; j < u.size(); ++j) m.set(0, 1 + j, u[j]);
  return m;
}

FrameFields FrameFields::zero(std::size_t points, std::size_t q, double length) {
  return {VField(points, q, length), VField(points, q, length), VField(points, 1, length),
          VField(points, q, length), VField(points, q * q, length)};
}

void FrameFields::validate() const {
  const std::size_t qq = q();
  v.require_grid(varpi);
  v.require_grid(e_perp);
  v.require_grid(e_par, false);
  v.require_grid(theta, false);
  if (e_par.dim() != 1 || theta.dim() != qq * qq) throw DimensionMismatch("frame fields have inconsistent shapes");
  for (std::size_t i = 0; i < qq; ++i)
    for (std::size_t j = 0; j < qq; ++j)
      for (std::size_t n = 0; n < v.points(); ++n)
        if (theta(i * qq + j, n) != -theta(j * qq + i, n)) throw DomainError("Theta is not skew-symmetric");
}

namespace {

ResidualNorms norms(const VField& r) {
  ResidualNorms out;
  for (std::size_t j = 0; j < r.points(); ++j) {
    double s = 0.0;
    for (std::size_t c = 0; c < r.dim(); ++c) s += r(c, j) * r(c, j);
    const double x = std::sqrt(s);
    out.max = std::isnan(x) ? x : std::max(out.max, x);
    out.mean += x;
  }
  out.mean /= double(r.points());
  return out;
}

void finish(StructureResiduals& r) {
  r.n1 = norms(r.r1);
  r.n2 = norms(r.r2);
  r.n3 = norms(r.r3);
  r.n4 = norms(r.r4);
}

std::vector<double> column(const VField& f, std::size_t j) {
  std::vector<double> x(f.dim());
  for (std::size_t c = 0; c < f.dim(); ++c) x[c] = f(c, j);
  return x;
}

Eigen::MatrixXd block(const VField& theta, std::size_t q, std::size_t j) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) m(Eigen::Index(a), Eigen::Index(b)) = theta(a * q + b, j);
  return m;
}

}  // namespace

StructureResiduals structure_residuals(const SpectralOps& ops, const FrameFields& f, const VField& v_tau) {
  f.validate();
  f.v.require_grid(v_tau);
  const std::size_t q = f.q(), n = f.v.points();
  StructureResiduals r;
  r.r1 = ops.D(f.e_par) + hier::dot(f.v, f.e_perp);
  r.r2 = f.varpi - hier::scale(f.e_par, f.v) + ops.D(f.e_perp);
  r.r3 = ops.D(f.varpi) - v_tau - f.e_perp;
  r.r4 = ops.D(f.theta);
  for (std::size_t k = 0; k < q; ++k)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t i = 0; i < n; ++i) r.r3(k, i) += f.v(j, i) * f.theta(j * q + k, i);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b)
      for (std::size_t i = 0; i < n; ++i)
        r.r4(a * q + b, i) -= f.v(a, i) * f.varpi(b, i) - f.varpi(a, i) * f.v(b, i);
  finish(r);
  return r;
}

StructureResiduals structure_residuals_matrix(const SpectralOps& ops, const FrameFields& f, const VField& v_tau) {
  f.validate();
  f.v.require_grid(v_tau);
  const std::size_t q = f.q(), n = f.v.points();
  const VField d_par = ops.D(f.e_par), d_perp = ops.D(f.e_perp), d_varpi = ops.D(f.varpi), d_theta = ops.D(f.theta);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(Eigen::Index(q), Eigen::Index(q));
  const Eigen::MatrixXd eX = embed_eX(q + 1).matrix();

  StructureResiduals r;
  r.r1 = VField(n, 1, f.v.length());
  r.r2 = VField(n, q, f.v.length());
  r.r3 = VField(n, q, f.v.length());
  r.r4 = VField(n, q * q, f.v.length());
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXd eY = embed_flow(f.e_par(0, i), column(f.e_perp, i)).matrix();
    const Eigen::MatrixXd gX = embed_conn(column(f.v, i), zero).matrix();
    const Eigen::MatrixXd gY = embed_conn(column(f.varpi, i), block(f.theta, q, i)).matrix();
    const Eigen::MatrixXd d_eY = embed_flow(d_par(0, i), column(d_perp, i)).matrix();
    const Eigen::MatrixXd dl_gY = embed_conn(column(d_varpi, i), block(d_theta, q, i)).matrix();
    const Eigen::MatrixXd dt_gX = embed_conn(column(v_tau, i), zero).matrix();

    const Eigen::MatrixXd torsion = d_eY + commutator(gX, eY) - commutator(gY, eX);
    const Eigen::MatrixXd curv = dl_gY - dt_gX + commutator(gX, gY) + commutator(eX, eY);
    r.r1(0, i) = torsion(0, 1);
    for (std::size_t k = 0; k < q; ++k) {
      r.r2(k, i) = torsion(0, Eigen::Index(2 + k));
      r.r3(k, i) = curv(1, Eigen::Index(2 + k));
    }
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) r.r4(a * q + b, i) = curv(Eigen::Index(2 + a), Eigen::Index(2 + b));
  }
  finish(r);
  return r;
}

FrameFields reconstruct_parallel(const SpectralOps& ops, const VField& v, const VField& e_perp, double e_par_edge) {
  v.require_grid(e_perp);
  const std::size_t q = v.dim(), n = v.points();
  FrameFields f = FrameFields::zero(n, q, v.length());
  f.v = v;
  f.e_perp = e_perp;
  f.e_par = -1.0 * ops.Dinv(hier::dot(v, e_perp));
  for (double& x : f.e_par.data()) x += e_par_edge;
  f.varpi = hier::scale(f.e_par, v) - ops.D(e_perp);
  VField src(n, q * q, v.length());
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b)
      for (std::size_t i = 0; i < n; ++i) src(a * q + b, i) = v(a, i) * f.varpi(b, i) - f.varpi(a, i) * v(b, i);
  VField upper = ops.Dinv(src);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b)
      for (std::size_t i = 0; i < n; ++i) {
        f.theta(a * q + b, i) = upper(a * q + b, i);
        f.theta(b * q + a, i) = -upper(a * q + b, i);
      }
  return f;
}

}  // namespace nsolit::klein
