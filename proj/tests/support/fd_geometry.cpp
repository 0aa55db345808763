#include "fd_geometry.hpp"

#include <Eigen/Dense>

namespace nsolit::oracle {

namespace {

Eigen::MatrixXd as_matrix(const Vec& flat, std::size_t n) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(Eigen::Index(i), Eigen::Index(j)) = flat[i * n + j];
  return m;
}

}  // namespace

FdGeometry::FdGeometry(const expr::MetricSpec& m, double step) : n_(m.n), h_(step), spec_(m) {}

template <class F>
Vec FdGeometry::partial(const F& f, const Vec& z, std::size_t var) const {
  Vec zp = z, zm = z;
  zp[var] += h_;
  zm[var] -= h_;
  Vec a = f(zp);
  const Vec b = f(zm);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] - b[i]) / (2.0 * h_);
  return a;
}

// e_i f = d_{x_i} f - N^a_i d_{y_a} f
template <class F>
Vec FdGeometry::horizontal(const F& f, const Vec& z, std::size_t i) const {
  Vec r = partial(f, z, i);
  const Vec N = nconn(z);
  for (std::size_t a = 0; a < n_; ++a) {
    const Vec dy = partial(f, z, n_ + a);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= N[a * n_ + i] * dy[k];
  }
  return r;
}

Vec FdGeometry::metric(const Vec& z) const {
  std::map<std::string, double> at;
  for (std::size_t i = 0; i < n_; ++i) at[spec_.coords[i]] = z[i];
  Vec g(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) g[i * n_ + j] = expr::evaluate(spec_.g[i][j], at);
  return g;
}

Vec FdGeometry::gamma(const Vec& z) const {
  const std::size_t n = n_;
  const Eigen::MatrixXd gi = as_matrix(metric(z), n).inverse();
  std::vector<Vec> dg(n);
  for (std::size_t k = 0; k < n; ++k) dg[k] = partial([this](const Vec& p) { return metric(p); }, z, k);
  Vec r(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t h = 0; h < n; ++h)
          r[(i * n + l) * n + m] += 0.5 * gi(Eigen::Index(i), Eigen::Index(h)) *
                                    (dg[m][l * n + h] + dg[l][m * n + h] - dg[h][l * n + m]);
  return r;
}

// G^i = 1/4 g~^ij g_jk gamma^k_lm y^l y^m with g~ = g
Vec FdGeometry::spray(const Vec& z) const {
  const std::size_t n = n_;
  const Vec g = metric(z);
  const Eigen::MatrixXd gi = as_matrix(g, n).inverse();
  const Vec gam = gamma(z);
  Vec q(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m) q[k] += gam[(k * n + l) * n + m] * z[n + l] * z[n + m];
  Vec r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) r[i] += 0.25 * gi(Eigen::Index(i), Eigen::Index(j)) * g[j * n + k] * q[k];
  return r;
}

Vec FdGeometry::nconn(const Vec& z) const {
  const std::size_t n = n_;
  Vec r(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec d = partial([this](const Vec& p) { return spray(p); }, z, n + i);
    for (std::size_t a = 0; a < n; ++a) r[a * n + i] = d[a];
  }
  return r;
}

Vec FdGeometry::omega(const Vec& z) const {
  const std::size_t n = n_;
  const auto Nf = [this](const Vec& p) { return nconn(p); };
  const Vec N = nconn(z);
  std::vector<Vec> dx(n), dy(n);
  for (std::size_t k = 0; k < n; ++k) {
    dx[k] = partial(Nf, z, k);
    dy[k] = partial(Nf, z, n + k);
  }
  Vec r(n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = dx[j][a * n + i] - dx[i][a * n + j];
        for (std::size_t b = 0; b < n; ++b) s += N[b * n + i] * dy[b][a * n + j] - N[b * n + j] * dy[b][a * n + i];
        r[(a * n + i) * n + j] = s;
      }
  return r;
}

Vec FdGeometry::anholonomy(const Vec& z) const {
  const std::size_t n = n_, d = 2 * n;
  // Coordinate components of frame field alpha.
  const auto frame = [this, n, d](std::size_t alpha, const Vec& p) {
    Vec c(d, 0.0);
    if (alpha < n) {
      c[alpha] = 1.0;
      const Vec N = nconn(p);
      for (std::size_t a = 0; a < n; ++a) c[n + a] = -N[a * n + alpha];
    } else {
      c[alpha] = 1.0;
    }
    return c;
  };
  // X(F) for a vector function F.
  const auto apply = [&](const Vec& X, std::size_t beta) {
    Vec r(d, 0.0);
    for (std::size_t mu = 0; mu < d; ++mu) {
      if (X[mu] == 0.0) continue;
      const Vec dF = partial([&](const Vec& p) { return frame(beta, p); }, z, mu);
      for (std::size_t k = 0; k < d; ++k) r[k] += X[mu] * dF[k];
    }
    return r;
  };
  const Vec N = nconn(z);
  Vec W(d * d * d, 0.0);
  for (std::size_t al = 0; al < d; ++al)
    for (std::size_t be = 0; be < d; ++be) {
      const Vec a = apply(frame(al, z), be);
      const Vec b = apply(frame(be, z), al);
      Vec E(d);
      for (std::size_t k = 0; k < d; ++k) E[k] = a[k] - b[k];
      // E = W^i e_i + W^a e_a: horizontal parts read off x, vertical parts corrected by N.
      for (std::size_t i = 0; i < n; ++i) W[(i * d + al) * d + be] = E[i];
      for (std::size_t c = 0; c < n; ++c) {
        double s = E[n + c];
        for (std::size_t i = 0; i < n; ++i) s += N[c * n + i] * E[i];
        W[((n + c) * d + al) * d + be] = s;
      }
    }
  return W;
}

// L^i_jk = 1/2 g^ih (e_k g_jh + e_j g_kh - e_h g_jk)
Vec FdGeometry::lh(const Vec& z) const {
  const std::size_t n = n_;
  const Eigen::MatrixXd gi = as_matrix(metric(z), n).inverse();
  std::vector<Vec> eg(n);
  for (std::size_t k = 0; k < n; ++k) eg[k] = horizontal([this](const Vec& p) { return metric(p); }, z, k);
  Vec r(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t h = 0; h < n; ++h)
          r[(i * n + j) * n + k] += 0.5 * gi(Eigen::Index(i), Eigen::Index(h)) *
                                    (eg[k][j * n + h] + eg[j][k * n + h] - eg[h][j * n + k]);
  return r;
}

// C^a_bc = 1/2 h^ae (e_c h_be + e_b h_ce - e_e h_bc) with h = g
Vec FdGeometry::cv(const Vec& z) const {
  const std::size_t n = n_;
  const Eigen::MatrixXd hi = as_matrix(metric(z), n).inverse();
  std::vector<Vec> eh(n);
  for (std::size_t c = 0; c < n; ++c) eh[c] = partial([this](const Vec& p) { return metric(p); }, z, n + c);
  Vec r(n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e)
          r[(a * n + b) * n + c] += 0.5 * hi(Eigen::Index(a), Eigen::Index(e)) *
                                    (eh[c][b * n + e] + eh[b][c * n + e] - eh[e][b * n + c]);
  return r;
}

std::map<std::string, Vec> FdGeometry::tables(const Vec& z) const {
  const std::size_t n = n_;
  const auto i3 = [n](std::size_t a, std::size_t b, std::size_t c) { return (a * n + b) * n + c; };
  const auto i4 = [n](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return ((a * n + b) * n + c) * n + d;
  };
  std::map<std::string, Vec> t;
  t["gamma"] = gamma(z);
  t["Gtilde"] = spray(z);
  const Vec N = nconn(z);
  t["N"] = N;
  t["W"] = anholonomy(z);
  const Vec Om = omega(z);
  t["Omega"] = Om;
  const Vec L = lh(z);
  const Vec C = cv(z);
  t["L"] = L;
  t["C"] = C;

  const auto Lf = [this](const Vec& p) { return lh(p); };
  const auto Cf = [this](const Vec& p) { return cv(p); };
  const auto Nf = [this](const Vec& p) { return nconn(p); };
  std::vector<Vec> eL(n), eC(n), dyL(n), dyC(n), dyN(n);
  for (std::size_t k = 0; k < n; ++k) {
    eL[k] = horizontal(Lf, z, k);
    eC[k] = horizontal(Cf, z, k);
    dyL[k] = partial(Lf, z, n + k);
    dyC[k] = partial(Cf, z, n + k);
    dyN[k] = partial(Nf, z, n + k);
  }

  Vec hhh(n * n * n), vhh(n * n * n), vvh(n * n * n), vvv(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        hhh[i3(a, b, c)] = L[i3(a, b, c)] - L[i3(a, c, b)];
        vhh[i3(a, b, c)] = Om[i3(a, b, c)];
        vvh[i3(a, b, c)] = dyN[b][a * n + c] - L[i3(a, b, c)];
        vvv[i3(a, b, c)] = C[i3(a, b, c)] - C[i3(a, c, b)];
      }
  t["T.hhh"] = hhh;
  t["T.hhv"] = C;
  t["T.vhh"] = vhh;
  t["T.vvh"] = vvh;
  t["T.vvv"] = vvv;

  Vec R(n * n * n * n, 0.0), P(n * n * n * n, 0.0), S(n * n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double r = eL[k][i3(i, h, j)] - eL[j][i3(i, h, k)];
          for (std::size_t m = 0; m < n; ++m) r += L[i3(m, h, j)] * L[i3(i, m, k)] - L[i3(m, h, k)] * L[i3(i, m, j)];
          for (std::size_t a = 0; a < n; ++a) r -= C[i3(i, h, a)] * Om[i3(a, k, j)];
          R[i4(i, h, j, k)] = r;
        }
  // P^i_jka = e_a L^i_jk - D_k C^i_ja + C^i_jb T^b_ka, T^b_ka = L^b_ak - d_a N^b_k
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a) {
          double dkc = eC[k][i3(i, j, a)];
          for (std::size_t m = 0; m < n; ++m) dkc += L[i3(i, m, k)] * C[i3(m, j, a)] - L[i3(m, j, k)] * C[i3(i, m, a)];
          for (std::size_t b = 0; b < n; ++b) dkc -= L[i3(b, a, k)] * C[i3(i, j, b)];
          double p = dyL[a][i3(i, j, k)] - dkc;
          for (std::size_t b = 0; b < n; ++b) p += C[i3(i, j, b)] * (L[i3(b, a, k)] - dyN[a][b * n + k]);
          P[i4(i, j, k, a)] = p;
        }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double s = dyC[d][i3(a, b, c)] - dyC[c][i3(a, b, d)];
          for (std::size_t f = 0; f < n; ++f) s += C[i3(f, b, c)] * C[i3(a, f, d)] - C[i3(f, b, d)] * C[i3(a, f, c)];
          S[i4(a, b, c, d)] = s;
        }
  t["R"] = R;
  t["P"] = P;
  t["S"] = S;

  Vec Rij(n * n, 0.0), Ria(n * n, 0.0), Rai(n * n, 0.0), Sab(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Rij[i * n + j] += R[i4(k, i, j, k)];
        Ria[i * n + j] -= P[i4(k, i, k, j)];
        Rai[i * n + j] += P[i4(k, i, j, k)];
        Sab[i * n + j] += S[i4(k, i, j, k)];
      }
  t["ricci.Rij"] = Rij;
  t["ricci.Ria"] = Ria;
  t["ricci.Rai"] = Rai;
  t["ricci.Sab"] = Sab;
  const Eigen::MatrixXd gi = as_matrix(metric(z), n).inverse();
  double ra = 0.0, sa = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ra += gi(Eigen::Index(i), Eigen::Index(j)) * Rij[i * n + j];
      sa += gi(Eigen::Index(i), Eigen::Index(j)) * Sab[i * n + j];
    }
  t["scalars.Rarrow"] = {ra};
  t["scalars.Sarrow"] = {sa};
  return t;
}

bool second_order_table(const std::string& name) {
  static const std::vector<std::string> first = {"gamma", "Gtilde", "N", "L", "C",
                                                 "T.hhh", "T.hhv", "T.vvh", "T.vvv"};
  for (const auto& f : first)
    if (f == name) return false;
  return true;
}

}  // namespace nsolit::oracle
