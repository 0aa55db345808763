#include "nsolit/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "nsolit/parallel.hpp"

namespace nsolit::geom {

using expr::differentiate;
using expr::Rational;
using expr::simplify_basic;

namespace {

constexpr std::size_t kRegularitySamples = 100;
constexpr std::uint64_t kRegularitySeed = 0x5eed;

Expr sum_of(const std::vector<Expr>& t) { return expr::sum(t); }

double det_at(const Tensor& m, const expr::Compiled& c, std::span<const double> x) {
  const std::size_t n = m.shape()[0];
  const auto v = c.eval(x);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(long(i), long(j)) = v[i * n + j];
  return a.determinant();
}

}  // namespace

std::vector<std::string> Coordinates::all() const {
  std::vector<std::string> v = x;
  v.insert(v.end(), y.begin(), y.end());
  return v;
}

std::vector<expr::Interval> Coordinates::box() const {
  std::vector<expr::Interval> b = xbox;
  b.insert(b.end(), ybox.begin(), ybox.end());
  return b;
}

Coordinates tm_coordinates(const MetricSpec& m) {
  Coordinates c;
  c.x = m.coords;
  c.xbox = m.box;
  for (std::size_t a = 0; a < m.n; ++a) {
    std::string name = "y" + std::to_string(a + 1);
    for (const auto& x : m.coords)
      if (x == name) throw InvalidArgument("coordinate name '" + name + "' is reserved for fibre coordinates");
    c.y.push_back(std::move(name));
    c.ybox.push_back({-1.0, 1.0});
  }
  return c;
}

SamplePoints sample(const Coordinates& c, std::size_t count, std::uint64_t seed) {
  return sample_box(c.all(), c.box(), count, seed);
}

Tensor inverse_metric(const MetricSpec& m) { return tensor_from(expr::matrix_inverse_sym(m.g)); }

void check_nondegenerate(const MetricSpec& m, const SamplePoints& s) {
  const Tensor g = tensor_from(m.g);
  const expr::Compiled c(g.data(), s.vars);
  for (const auto& p : s.points)
    if (std::abs(det_at(g, c, p)) <= 1e-12) throw SingularMatrix("metric is degenerate at a sample point");
}

Christoffel christoffel(const MetricSpec& m) {
  const std::size_t n = m.n;
  const Tensor ginv = inverse_metric(m);
  // dg(l, h, k) = ∂_k g_lh
  Tensor dg({n, n, n});
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t k = 0; k < n; ++k) dg(l, h, k) = simplify_basic(differentiate(m.g[l][h], m.coords[k]));

  Christoffel out{Tensor({n, n, n})};
  std::vector<std::array<std::size_t, 3>> jobs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t mm = l; mm < n; ++mm) jobs.push_back({i, l, mm});
  std::vector<Expr> vals(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t q) {
    const auto [i, l, mm] = jobs[q];
    std::vector<Expr> t;
    for (std::size_t h = 0; h < n; ++h)
      t.push_back(ginv(i, h) * (dg(l, h, mm) + dg(mm, h, l) - dg(l, mm, h)));
    vals[q] = simplify_basic(Expr(0.5) * sum_of(t));
  });
  for (std::size_t q = 0; q < jobs.size(); ++q) {
    const auto [i, l, mm] = jobs[q];
    out.gamma(i, l, mm) = vals[q];
    out.gamma(i, mm, l) = vals[q];
  }
  return out;
}

VerticalMetric vertical_metric(const MetricSpec& m, VielbeinMode mode,
                               const std::vector<std::vector<double>>& hessian) {
  const std::size_t n = m.n;
  VerticalMetric v;
  v.coords = tm_coordinates(m);
  std::vector<Expr> y;
  for (const auto& name : v.coords.y) y.push_back(Expr::variable(name));

  expr::Matrix c(n, std::vector<Expr>(n));
  if (mode == VielbeinMode::Identity) {
    c = m.g;
  } else {
    if (hessian.size() != n) throw DimensionMismatch("constant Hessian has wrong size");
    for (std::size_t a = 0; a < n; ++a) {
      if (hessian[a].size() != n) throw DimensionMismatch("constant Hessian is not square");
      for (std::size_t b = 0; b < n; ++b) {
        if (hessian[a][b] != hessian[b][a]) throw InvalidArgument("constant Hessian is not symmetric");
        c[a][b] = Expr(hessian[a][b]);
      }
    }
  }
  std::vector<Expr> terms;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) terms.push_back(c[a][b] * y[a] * y[b]);
  v.lagrangian = simplify_basic(sum_of(terms));

  v.gtilde = Tensor({n, n});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const Expr h = differentiate(differentiate(v.lagrangian, v.coords.y[a]), v.coords.y[b]);
      v.gtilde(a, b) = simplify_basic(Expr(0.5) * h);
      v.gtilde(b, a) = v.gtilde(a, b);
    }

  const SamplePoints s = sample(v.coords, kRegularitySamples, kRegularitySeed);
  const expr::Compiled comp(v.gtilde.data(), s.vars);
  for (const auto& p : s.points)
    if (std::abs(det_at(v.gtilde, comp, p)) <= 1e-12) {
      v.regular = false;
      throw DegenerateHessian("vertical metric is degenerate at a sample point");
    }
  return v;
}

Semispray semispray(const MetricSpec& m, const VerticalMetric& v, SemisprayConvention convention) {
  const std::size_t n = m.n;
  Semispray s;
  s.coords = v.coords;
  s.convention = convention;
  s.G = Tensor({n});
  const Tensor gtinv = tensor_from(expr::matrix_inverse_sym(matrix_from(v.gtilde)));
  std::vector<Expr> y;
  for (const auto& name : v.coords.y) y.push_back(Expr::variable(name));

  // B_j is the covector contracted with g~^ij
  std::vector<Expr> B(n);
  if (convention == SemisprayConvention::Printed) {
    const Christoffel ch = christoffel(m);
    std::vector<Expr> yy(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Expr> t;
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t mm = 0; mm < n; ++mm) t.push_back(ch.gamma(k, l, mm) * y[l] * y[mm]);
      yy[k] = simplify_basic(sum_of(t));
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> t;
      for (std::size_t k = 0; k < n; ++k) t.push_back(m.g[j][k] * yy[k]);
      B[j] = simplify_basic(sum_of(t));
    }
  } else {
    const Expr& L = v.lagrangian;
    for (std::size_t j = 0; j < n; ++j) {
      const Expr dLy = differentiate(L, v.coords.y[j]);
      std::vector<Expr> t;
      for (std::size_t k = 0; k < n; ++k) t.push_back(differentiate(dLy, v.coords.x[k]) * y[k]);
      t.push_back(-differentiate(L, v.coords.x[j]));
      B[j] = simplify_basic(sum_of(t));
    }
  }
  parallel_for(n, [&](std::size_t i) {
    std::vector<Expr> t;
    for (std::size_t j = 0; j < n; ++j) t.push_back(gtinv(i, j) * B[j]);
    s.G(i) = simplify_basic(Expr(0.25) * sum_of(t));
  });
  return s;
}

GeodesicField::GeodesicField(const Semispray& s) : n_(s.coords.n()), g_(s.G.data(), s.coords.all()) {}

void GeodesicField::operator()(std::span<const double> x, std::span<const double> y, std::span<double> dx,
                               std::span<double> dy) const {
  std::vector<double> u(x.begin(), x.end());
  u.insert(u.end(), y.begin(), y.end());
  const auto G = g_.eval(u);
  for (std::size_t i = 0; i < n_; ++i) {
    dx[i] = y[i];
    dy[i] = -2.0 * G[i];
  }
}

GeodesicDerivative geodesic_rhs(const Semispray& s, std::span<const double> x, std::span<const double> y) {
  const GeodesicField f(s);
  GeodesicDerivative d{std::vector<double>(f.dim()), std::vector<double>(f.dim())};
  f(x, y, d.dx, d.dy);
  return d;
}

std::vector<std::vector<double>> integrate_geodesic(const GeodesicField& f, std::vector<double> x,
                                                    std::vector<double> y, double dt, std::size_t steps) {
  const std::size_t n = f.dim();
  std::vector<std::vector<double>> path{x};
  std::vector<double> kx[4], ky[4], xs(n), ys(n);
  for (auto& k : kx) k.resize(n);
  for (auto& k : ky) k.resize(n);
  for (std::size_t s = 0; s < steps; ++s) {
    static constexpr double w[4] = {0.0, 0.5, 0.5, 1.0};
    for (int st = 0; st < 4; ++st) {
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[i] + (st ? w[st] * dt * kx[st - 1][i] : 0.0);
        ys[i] = y[i] + (st ? w[st] * dt * ky[st - 1][i] : 0.0);
      }
      f(xs, ys, kx[st], ky[st]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (kx[0][i] + 2 * kx[1][i] + 2 * kx[2][i] + kx[3][i]);
      y[i] += dt / 6.0 * (ky[0][i] + 2 * ky[1][i] + 2 * ky[2][i] + ky[3][i]);
    }
    path.push_back(x);
  }
  return path;
}

namespace {

// Fourth-order first and second derivatives of a sampled series, with
// one-sided stencils on the two samples nearest each end.
std::vector<std::vector<double>> derivative4(const std::vector<std::vector<double>>& f, double h, int order) {
  const std::size_t K = f.size();
  const std::size_t n = f[0].size();
  static constexpr double c1[2][5] = {{-25, 48, -36, 16, -3}, {-3, -10, 18, -6, 1}};
  static constexpr double c2[2][6] = {{45, -154, 214, -156, 61, -10}, {10, -15, -4, 14, -6, 1}};
  const double scale = order == 1 ? 12 * h : 12 * h * h;
  const double mirror = order == 1 ? -1.0 : 1.0;
  std::vector<std::vector<double>> d(K, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < 2; ++e) {
      double lo = 0, hi = 0;
      for (std::size_t q = 0; q < (order == 1 ? 5u : 6u); ++q) {
        const double c = order == 1 ? c1[e][q] : c2[e][q];
        lo += c * f[q][i];
        hi += c * f[K - 1 - q][i];
      }
      d[e][i] = lo / scale;
      d[K - 1 - e][i] = mirror * hi / scale;
    }
    for (std::size_t k = 2; k + 2 < K; ++k)
      d[k][i] = order == 1 ? (f[k - 2][i] - 8 * f[k - 1][i] + 8 * f[k + 1][i] - f[k + 2][i]) / scale
                           : (-f[k - 2][i] + 16 * f[k - 1][i] - 30 * f[k][i] + 16 * f[k + 1][i] - f[k + 2][i]) / scale;
  }
  return d;
}

}  // namespace

std::vector<std::vector<double>> euler_lagrange_residual(const VerticalMetric& v,
                                                         const std::vector<std::vector<double>>& path,
                                                         double dtau) {
  if (path.size() < 6) throw InvalidArgument("path too short (need at least 6 samples)");
  const std::size_t n = v.coords.n();
  for (const auto& p : path)
    if (p.size() != n) throw DimensionMismatch("path sample has wrong dimension");
  // d/dtau(dL/dy^i) = d2L/dy^i dx^k xdot^k + d2L/dy^i dy^j xddot^j
  std::vector<Expr> d;
  for (std::size_t i = 0; i < n; ++i) {
    const Expr Ly = differentiate(v.lagrangian, v.coords.y[i]);
    for (std::size_t k = 0; k < n; ++k) d.push_back(simplify_basic(differentiate(Ly, v.coords.x[k])));
    for (std::size_t j = 0; j < n; ++j) d.push_back(simplify_basic(differentiate(Ly, v.coords.y[j])));
    d.push_back(simplify_basic(differentiate(v.lagrangian, v.coords.x[i])));
  }
  const expr::Compiled c(d, v.coords.all());

  const auto xdot = derivative4(path, dtau, 1);
  const auto xddot = derivative4(path, dtau, 2);
  std::vector<std::vector<double>> r(path.size(), std::vector<double>(n));
  for (std::size_t k = 0; k < path.size(); ++k) {
    std::vector<double> u = path[k];
    u.insert(u.end(), xdot[k].begin(), xdot[k].end());
    const auto val = c.eval(u);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = val.data() + i * (2 * n + 1);
      double s = -row[2 * n];
      for (std::size_t q = 0; q < n; ++q) s += row[q] * xdot[k][q] + row[n + q] * xddot[k][q];
      r[k][i] = s;
    }
  }
  return r;
}

NConnection nconnection(const Semispray& s) {
  const std::size_t n = s.coords.n();
  NConnection N{Tensor({n, n}), s.coords};
  parallel_for(n * n, [&](std::size_t q) {
    const std::size_t a = q / n, i = q % n;
    N.N(a, i) = simplify_basic(differentiate(s.G(a), s.coords.y[i]));
  });
  return N;
}

Expr adapted_derivative(const NConnection& N, const Expr& f, Slot slot) {
  if (slot.vertical) {
    if (slot.index >= N.coords.m()) throw DimensionMismatch("vertical slot out of range");
    return differentiate(f, N.coords.y[slot.index]);
  }
  if (slot.index >= N.coords.n()) throw DimensionMismatch("horizontal slot out of range");
  std::vector<Expr> t{differentiate(f, N.coords.x[slot.index])};
  for (std::size_t a = 0; a < N.coords.m(); ++a) {
    const Expr& Nai = N.N(a, slot.index);
    if (Nai.is_zero()) continue;
    t.push_back(-(Nai * differentiate(f, N.coords.y[a])));
  }
  return sum_of(t);
}

Tensor ncurvature(const NConnection& N) {
  const std::size_t n = N.coords.n(), m = N.coords.m();
  Tensor O({m, n, n});
  std::vector<std::array<std::size_t, 3>> jobs;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) jobs.push_back({a, i, j});
  std::vector<Expr> vals(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t q) {
    const auto [a, i, j] = jobs[q];
    std::vector<Expr> t{differentiate(N.N(a, i), N.coords.x[j]), -differentiate(N.N(a, j), N.coords.x[i])};
    for (std::size_t b = 0; b < m; ++b) {
      t.push_back(N.N(b, i) * differentiate(N.N(a, j), N.coords.y[b]));
      t.push_back(-(N.N(b, j) * differentiate(N.N(a, i), N.coords.y[b])));
    }
    vals[q] = simplify_basic(sum_of(t));
  });
  for (std::size_t q = 0; q < jobs.size(); ++q) {
    const auto [a, i, j] = jobs[q];
    O(a, i, j) = vals[q];
    O(a, j, i) = simplify_basic(-vals[q]);
  }
  return O;
}

Anholonomy anholonomy(const NConnection& N) {
  const std::size_t n = N.coords.n(), m = N.coords.m(), d = n + m;
  Anholonomy A{Tensor({d, d, d})};
  const Tensor O = ncurvature(N);
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < m; ++a) {
        const Expr w = simplify_basic(differentiate(N.N(b, i), N.coords.y[a]));
        A.W(n + b, i, n + a) = w;
        A.W(n + b, n + a, i) = simplify_basic(-w);
      }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) A.W(n + a, i, j) = O(a, i, j);
  return A;
}

}  // namespace nsolit::geom
