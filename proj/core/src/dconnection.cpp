#include "nsolit/dconnection.hpp"

#include <Eigen/Dense>

#include "nsolit/parallel.hpp"

namespace nsolit::geom {

using expr::differentiate;
using expr::simplify_basic;

namespace {

// Fills every entry of `t` in parallel from f(multi-index).
void fill(Tensor& t, const std::function<Expr(const std::vector<std::size_t>&)>& f) {
  parallel_for(t.size(), [&](std::size_t q) { t.data()[q] = simplify_basic(f(t.index_of(q))); });
}

Expr sum_of(const std::vector<Expr>& t) { return expr::sum(t); }

struct Frames {
  const NConnection& N;
  Expr h(const Expr& f, std::size_t i) const { return adapted_derivative(N, f, Slot::h(i)); }
  Expr v(const Expr& f, std::size_t a) const { return adapted_derivative(N, f, Slot::v(a)); }
};

// d(p, q, s) = e_s t(p, q) for a rank-2 table, horizontal or vertical slot s.
Tensor frame_derivatives(const Tensor& t, const Frames& e, bool vertical, std::size_t slots) {
  Tensor d({t.shape()[0], t.shape()[1], slots});
  fill(d, [&](const std::vector<std::size_t>& ix) {
    const Expr& f = t(ix[0], ix[1]);
    return vertical ? e.v(f, ix[2]) : e.h(f, ix[2]);
  });
  return d;
}

}  // namespace

DMetric make_dmetric(Tensor g, Tensor h, NConnection N) {
  const std::size_t n = N.coords.n(), m = N.coords.m();
  if (g.shape() != std::vector<std::size_t>{n, n}) throw DimensionMismatch("h-block does not match N");
  if (h.shape() != std::vector<std::size_t>{m, m}) throw DimensionMismatch("v-block does not match N");
  if (N.N.shape() != std::vector<std::size_t>{m, n}) throw DimensionMismatch("N has wrong shape");
  return DMetric{std::move(g), std::move(h), std::move(N), n, m};
}

DMetric sasaki_dmetric(const MetricSpec& m, const VerticalMetric& v, const NConnection& N) {
  if (v.gtilde.shape() != std::vector<std::size_t>{m.n, m.n} || N.coords.n() != m.n || N.coords.m() != m.n)
    throw DimensionMismatch("Sasaki lift needs n = m");
  return make_dmetric(v.gtilde, v.gtilde, N);
}

Tensor coordinate_form(const DMetric& dm) {
  const std::size_t n = dm.n, m = dm.m;
  Tensor G({n + m, n + m});
  // hN(a, i) = h_ab N^b_i
  Tensor hN({m, n});
  fill(hN, [&](const std::vector<std::size_t>& ix) {
    std::vector<Expr> t;
    for (std::size_t b = 0; b < m; ++b) t.push_back(dm.h(ix[0], b) * dm.N.N(b, ix[1]));
    return sum_of(t);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> t{dm.g(i, j)};
      for (std::size_t a = 0; a < m; ++a) t.push_back(dm.N.N(a, i) * hN(a, j));
      G(i, j) = simplify_basic(sum_of(t));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a) {
      G(i, n + a) = hN(a, i);
      G(n + a, i) = hN(a, i);
    }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) G(n + a, n + b) = dm.h(a, b);
  return G;
}

BlockValues split_coordinate_form(const std::vector<double>& ghat, std::size_t n, std::size_t m) {
  const std::size_t d = n + m;
  if (ghat.size() != d * d) throw DimensionMismatch("coordinate form has wrong size");
  auto at = [&](std::size_t r, std::size_t c) { return ghat[r * d + c]; };
  Eigen::MatrixXd h(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  Eigen::MatrixXd hN(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) h(long(a), long(b)) = at(n + a, n + b);
    for (std::size_t i = 0; i < n; ++i) hN(long(a), long(i)) = at(n + a, i);
  }
  const Eigen::MatrixXd N = h.ldlt().solve(hN);
  const Eigen::MatrixXd corr = N.transpose() * h * N;
  BlockValues out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.g.push_back(at(i, j) - corr(long(i), long(j)));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) out.h.push_back(h(long(a), long(b)));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i) out.N.push_back(N(long(a), long(i)));
  return out;
}

DConnection canonical_dconnection(const DMetric& dm, Variant variant, CvReading reading) {
  const std::size_t n = dm.n, m = dm.m;
  if (variant == Variant::TM && n != m) throw DimensionMismatch("tm variant needs n = m");
  const Frames e{dm.N};
  const Tensor ginv = tensor_from(expr::matrix_inverse_sym(matrix_from(dm.g)));
  const Tensor hinv = tensor_from(expr::matrix_inverse_sym(matrix_from(dm.h)));
  const Tensor eg = frame_derivatives(dm.g, e, false, n);  // e_k g_ij
  const Tensor eh_v = frame_derivatives(dm.h, e, true, m);  // e_c h_ab

  DConnection dc;
  dc.variant = variant;
  dc.Lh = Tensor({n, n, n});
  fill(dc.Lh, [&](const std::vector<std::size_t>& ix) {
    const std::size_t i = ix[0], j = ix[1], k = ix[2];
    std::vector<Expr> t;
    for (std::size_t h = 0; h < n; ++h) t.push_back(ginv(i, h) * (eg(j, h, k) + eg(k, h, j) - eg(j, k, h)));
    return Expr(0.5) * sum_of(t);
  });

  dc.Cv = Tensor({m, m, m});
  fill(dc.Cv, [&](const std::vector<std::size_t>& ix) {
    const std::size_t a = ix[0], b = ix[1], c = ix[2];
    std::vector<Expr> t;
    for (std::size_t d = 0; d < m; ++d) {
      const Expr second = reading == CvReading::Symmetric ? eh_v(c, d, b) : eh_v(c, d, c);
      t.push_back(hinv(a, d) * (eh_v(b, d, c) + second - eh_v(b, c, d)));
    }
    return Expr(0.5) * sum_of(t);
  });

  if (variant == Variant::TM) {
    dc.Lv = dc.Lh;
    dc.Ch = dc.Cv;
    return dc;
  }

  const Tensor eh_h = frame_derivatives(dm.h, e, false, n);  // e_k h_ab
  const Tensor eg_v = frame_derivatives(dm.g, e, true, m);  // e_c g_ij
  // dN(d, k, b) = ∂N^d_k/∂y^b
  Tensor dN({m, n, m});
  fill(dN, [&](const std::vector<std::size_t>& ix) { return e.v(dm.N.N(ix[0], ix[1]), ix[2]); });

  dc.Lv = Tensor({m, m, n});
  fill(dc.Lv, [&](const std::vector<std::size_t>& ix) {
    const std::size_t a = ix[0], b = ix[1], k = ix[2];
    std::vector<Expr> t;
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<Expr> inner{eh_h(b, c, k)};
      for (std::size_t d = 0; d < m; ++d) {
        inner.push_back(-(dm.h(d, c) * dN(d, k, b)));
        inner.push_back(-(dm.h(d, b) * dN(d, k, c)));
      }
      t.push_back(hinv(a, c) * sum_of(inner));
    }
    return dN(a, k, b) + Expr(0.5) * sum_of(t);
  });

  dc.Ch = Tensor({n, n, m});
  fill(dc.Ch, [&](const std::vector<std::size_t>& ix) {
    const std::size_t i = ix[0], j = ix[1], c = ix[2];
    std::vector<Expr> t;
    for (std::size_t k = 0; k < n; ++k) t.push_back(ginv(i, k) * eg_v(j, k, c));
    return Expr(0.5) * sum_of(t);
  });
  return dc;
}

Torsion dtorsion(const DConnection& dc, const NConnection& N) {
  const std::size_t n = N.coords.n(), m = N.coords.m();
  const Frames e{N};
  const Tensor O = ncurvature(N);
  Torsion T;
  T.hhh = Tensor({n, n, n});
  fill(T.hhh, [&](const std::vector<std::size_t>& ix) {
    return dc.Lh(ix[0], ix[1], ix[2]) - dc.Lh(ix[0], ix[2], ix[1]);
  });
  T.hhv = dc.Ch;
  T.vhh = O;
  T.vvh = Tensor({m, m, n});
  fill(T.vvh, [&](const std::vector<std::size_t>& ix) {
    return e.v(N.N(ix[0], ix[2]), ix[1]) - dc.Lv(ix[0], ix[1], ix[2]);
  });
  T.vvv = Tensor({m, m, m});
  fill(T.vvv, [&](const std::vector<std::size_t>& ix) {
    return dc.Cv(ix[0], ix[1], ix[2]) - dc.Cv(ix[0], ix[2], ix[1]);
  });
  return T;
}

namespace {

// Fills a table antisymmetric in its last two indices from the entries p < q.
void fill_antisym(Tensor& t, const std::function<Expr(std::size_t, std::size_t, std::size_t, std::size_t)>& f) {
  const auto& s = t.shape();
  std::vector<std::array<std::size_t, 4>> jobs;
  for (std::size_t a = 0; a < s[0]; ++a)
    for (std::size_t b = 0; b < s[1]; ++b)
      for (std::size_t p = 0; p < s[2]; ++p)
        for (std::size_t q = p + 1; q < s[3]; ++q) jobs.push_back({a, b, p, q});
  std::vector<Expr> v(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const auto [a, b, p, q] = jobs[k];
    v[k] = simplify_basic(f(a, b, p, q));
  });
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto [a, b, p, q] = jobs[k];
    t(a, b, p, q) = v[k];
    t(a, b, q, p) = simplify_basic(-v[k]);
  }
}

}  // namespace

Curvature dcurvature(const DConnection& dc, const NConnection& N) {
  const std::size_t n = N.coords.n(), m = N.coords.m();
  const Frames e{N};
  const Tensor O = ncurvature(N);
  // Tka(b, k, a) = T^b_ka = −T^b_ak = L^b_ak − ∂_a N^b_k
  Tensor Tka({m, n, m});
  fill(Tka, [&](const std::vector<std::size_t>& ix) {
    const std::size_t b = ix[0], k = ix[1], a = ix[2];
    return dc.Lv(b, a, k) - e.v(N.N(b, k), a);
  });

  Curvature ct;
  ct.variant = dc.variant;
  ct.R = Tensor({n, n, n, n});
  fill_antisym(ct.R, [&](std::size_t i, std::size_t h, std::size_t j, std::size_t k) {
    std::vector<Expr> t{e.h(dc.Lh(i, h, j), k), -e.h(dc.Lh(i, h, k), j)};
    for (std::size_t mm = 0; mm < n; ++mm) {
      t.push_back(dc.Lh(mm, h, j) * dc.Lh(i, mm, k));
      t.push_back(-(dc.Lh(mm, h, k) * dc.Lh(i, mm, j)));
    }
    for (std::size_t a = 0; a < m; ++a) t.push_back(-(dc.Ch(i, h, a) * O(a, k, j)));
    return sum_of(t);
  });

  ct.P = Tensor({n, n, n, m});
  fill(ct.P, [&](const std::vector<std::size_t>& ix) {
    const std::size_t i = ix[0], j = ix[1], k = ix[2], a = ix[3];
    // D_k C^i_ja
    std::vector<Expr> d{e.h(dc.Ch(i, j, a), k)};
    for (std::size_t mm = 0; mm < n; ++mm) {
      d.push_back(dc.Lh(i, mm, k) * dc.Ch(mm, j, a));
      d.push_back(-(dc.Lh(mm, j, k) * dc.Ch(i, mm, a)));
    }
    for (std::size_t b = 0; b < m; ++b) d.push_back(-(dc.Lv(b, a, k) * dc.Ch(i, j, b)));
    std::vector<Expr> t{e.v(dc.Lh(i, j, k), a), -sum_of(d)};
    for (std::size_t b = 0; b < m; ++b) t.push_back(dc.Ch(i, j, b) * Tka(b, k, a));
    return sum_of(t);
  });

  ct.S = Tensor({m, m, m, m});
  fill_antisym(ct.S, [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    std::vector<Expr> t{e.v(dc.Cv(a, b, c), d), -e.v(dc.Cv(a, b, d), c)};
    for (std::size_t f = 0; f < m; ++f) {
      t.push_back(dc.Cv(f, b, c) * dc.Cv(a, f, d));
      t.push_back(-(dc.Cv(f, b, d) * dc.Cv(a, f, c)));
    }
    return sum_of(t);
  });

  if (dc.variant == Variant::TM) return ct;

  ct.Rv = Tensor({m, m, n, n});
  fill_antisym(ct.Rv, [&](std::size_t a, std::size_t b, std::size_t j, std::size_t k) {
    std::vector<Expr> t{e.h(dc.Lv(a, b, j), k), -e.h(dc.Lv(a, b, k), j)};
    for (std::size_t c = 0; c < m; ++c) {
      t.push_back(dc.Lv(c, b, j) * dc.Lv(a, c, k));
      t.push_back(-(dc.Lv(c, b, k) * dc.Lv(a, c, j)));
      t.push_back(-(dc.Cv(a, b, c) * O(c, k, j)));
    }
    return sum_of(t);
  });

  ct.Pv = Tensor({m, m, n, m});
  fill(ct.Pv, [&](const std::vector<std::size_t>& ix) {
    const std::size_t c = ix[0], b = ix[1], k = ix[2], a = ix[3];
    std::vector<Expr> d{e.h(dc.Cv(c, b, a), k)};
    for (std::size_t f = 0; f < m; ++f) {
      d.push_back(dc.Lv(c, f, k) * dc.Cv(f, b, a));
      d.push_back(-(dc.Lv(f, b, k) * dc.Cv(c, f, a)));
      d.push_back(-(dc.Lv(f, a, k) * dc.Cv(c, b, f)));
    }
    std::vector<Expr> t{e.v(dc.Lv(c, b, k), a), -sum_of(d)};
    for (std::size_t f = 0; f < m; ++f) t.push_back(dc.Cv(c, b, f) * Tka(f, k, a));
    return sum_of(t);
  });

  ct.Sh = Tensor({n, n, m, m});
  fill_antisym(ct.Sh, [&](std::size_t i, std::size_t j, std::size_t b, std::size_t c) {
    std::vector<Expr> t{e.v(dc.Ch(i, j, b), c), -e.v(dc.Ch(i, j, c), b)};
    for (std::size_t h = 0; h < n; ++h) {
      t.push_back(dc.Ch(h, j, b) * dc.Ch(i, h, c));
      t.push_back(-(dc.Ch(h, j, c) * dc.Ch(i, h, b)));
    }
    return sum_of(t);
  });
  return ct;
}

Ricci ricci_and_scalars(const Curvature& ct, const DMetric& dm) {
  const std::size_t n = dm.n, m = dm.m;
  const Tensor& Pmixed = ct.variant == Variant::VB ? ct.Pv : ct.P;
  Ricci r;
  r.Rij = Tensor({n, n});
  fill(r.Rij, [&](const std::vector<std::size_t>& ix) {
    std::vector<Expr> t;
    for (std::size_t k = 0; k < n; ++k) t.push_back(ct.R(k, ix[0], ix[1], k));
    return sum_of(t);
  });
  r.Ria = Tensor({n, m});
  fill(r.Ria, [&](const std::vector<std::size_t>& ix) {
    std::vector<Expr> t;
    for (std::size_t k = 0; k < n; ++k) t.push_back(ct.P(k, ix[0], k, ix[1]));
    return -sum_of(t);
  });
  r.Rai = Tensor({m, n});
  fill(r.Rai, [&](const std::vector<std::size_t>& ix) {
    std::vector<Expr> t;
    for (std::size_t b = 0; b < m; ++b) t.push_back(Pmixed(b, ix[0], ix[1], b));
    return sum_of(t);
  });
  r.Sab = Tensor({m, m});
  fill(r.Sab, [&](const std::vector<std::size_t>& ix) {
    std::vector<Expr> t;
    for (std::size_t c = 0; c < m; ++c) t.push_back(ct.S(c, ix[0], ix[1], c));
    return sum_of(t);
  });
  const Tensor ginv = tensor_from(expr::matrix_inverse_sym(matrix_from(dm.g)));
  const Tensor hinv = tensor_from(expr::matrix_inverse_sym(matrix_from(dm.h)));
  std::vector<Expr> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t.push_back(ginv(i, j) * r.Rij(i, j));
  r.Rarrow = simplify_basic(sum_of(t));
  t.clear();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) t.push_back(hinv(a, b) * r.Sab(a, b));
  r.Sarrow = simplify_basic(sum_of(t));
  return r;
}

CompatResidual compat_residual(const DConnection& dc, const DMetric& dm) {
  const std::size_t n = dm.n, m = dm.m;
  const Frames e{dm.N};
  CompatResidual r;
  r.Dk_g = Tensor({n, n, n});
  fill(r.Dk_g, [&](const std::vector<std::size_t>& ix) {
    const std::size_t i = ix[0], j = ix[1], k = ix[2];
    std::vector<Expr> t{e.h(dm.g(i, j), k)};
    for (std::size_t q = 0; q < n; ++q) {
      t.push_back(-(dc.Lh(q, i, k) * dm.g(q, j)));
      t.push_back(-(dc.Lh(q, j, k) * dm.g(i, q)));
    }
    return sum_of(t);
  });
  r.Dc_g = Tensor({n, n, m});
  fill(r.Dc_g, [&](const std::vector<std::size_t>& ix) {
    const std::size_t i = ix[0], j = ix[1], c = ix[2];
    std::vector<Expr> t{e.v(dm.g(i, j), c)};
    for (std::size_t q = 0; q < n; ++q) {
      t.push_back(-(dc.Ch(q, i, c) * dm.g(q, j)));
      t.push_back(-(dc.Ch(q, j, c) * dm.g(i, q)));
    }
    return sum_of(t);
  });
  r.Dk_h = Tensor({m, m, n});
  fill(r.Dk_h, [&](const std::vector<std::size_t>& ix) {
    const std::size_t a = ix[0], b = ix[1], k = ix[2];
    std::vector<Expr> t{e.h(dm.h(a, b), k)};
    for (std::size_t d = 0; d < m; ++d) {
      t.push_back(-(dc.Lv(d, a, k) * dm.h(d, b)));
      t.push_back(-(dc.Lv(d, b, k) * dm.h(a, d)));
    }
    return sum_of(t);
  });
  r.Dc_h = Tensor({m, m, m});
  fill(r.Dc_h, [&](const std::vector<std::size_t>& ix) {
    const std::size_t a = ix[0], b = ix[1], c = ix[2];
    std::vector<Expr> t{e.v(dm.h(a, b), c)};
    for (std::size_t d = 0; d < m; ++d) {
      t.push_back(-(dc.Cv(d, a, c) * dm.h(d, b)));
      t.push_back(-(dc.Cv(d, b, c) * dm.h(a, d)));
    }
    return sum_of(t);
  });
  return r;
}

double max_abs(const CompatResidual& r, const SamplePoints& s) {
  double v = 0.0;
  for (const Tensor* t : {&r.Dk_g, &r.Dc_g, &r.Dk_h, &r.Dc_h}) v = std::max(v, nsolit::max_abs(*t, s));
  return v;
}

}  // namespace nsolit::geom
