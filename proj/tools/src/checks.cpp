#include <chrono>
#include <cmath>
#include <functional>

#include "nsolit/dconnection.hpp"
#include "nsolit/geometry.hpp"
#include "nsolit/hierarchy.hpp"
#include "nsolit/klein.hpp"
#include "nsolit_cli/cli.hpp"

namespace nsolit::cli {

namespace {

using expr::Expr;
using hier::SpectralOps;
using hier::VField;

constexpr const char* kSphere =
    "dim 2; coords x1, x2; box x1 in [0.3, 2.8]; box x2 in [0, 6.2];\n"
    "g[1][1] = 1; g[2][2] = sin(x1)^2;";

struct Suite {
  std::vector<CheckResult> results;
  void add(std::string name, double value, double tol, std::string detail = {}) {
    results.push_back({std::move(name), value, tol, value <= tol, std::move(detail)});
  }
  /// Runs `body`; an exception is recorded as a failed check of that name.
  void guard(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      results.push_back({name, NAN, 0.0, false, e.what()});
    }
  }
};

expr::MetricSpec diag_metric(const std::vector<double>& signs) {
  std::vector<std::string> coords;
  expr::Matrix g(signs.size(), std::vector<Expr>(signs.size(), Expr(0.0)));
  for (std::size_t i = 0; i < signs.size(); ++i) {
    coords.push_back("x" + std::to_string(i + 1));
    g[i][i] = Expr(signs[i]);
  }
  return expr::make_metric(coords, g);
}

double bundle_max(const GeometryBundle& b) {
  double m = 0.0;
  for (const auto& [name, t] : b.tables) m = std::max(m, max_abs(t, b.points));
  return m;
}

Tensor antisym_defect(const Tensor& t, std::size_t a, std::size_t b) {
  Tensor r(t.shape());
  for (std::size_t f = 0; f < t.size(); ++f) {
    auto idx = t.index_of(f);
    auto swapped = idx;
    std::swap(swapped[a], swapped[b]);
    std::size_t g = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) g = g * t.shape()[k] + swapped[k];
    r.data()[f] = t.data()[f] + t.data()[g];
  }
  return r;
}

void geometry_suite(Suite& s, const CheckOptions& opt) {
  for (const auto& signs : std::vector<std::vector<double>>{{1, 1}, {1, -1}, {1, 1, 1}, {-1, 1, 1}}) {
    std::string name = "flat_zero_n" + std::to_string(signs.size()) + (signs[0] < 0 || signs[1] < 0 ? "_indef" : "");
    s.guard(name, [&] { s.add(name, bundle_max(geometry_bundle(diag_metric(signs), opt.samples, opt.seed)), 1e-14); });
  }

  s.guard("sphere_pipeline", [&] {
    const auto m = expr::parse_metric(kSphere);
    const auto coords = geom::tm_coordinates(m);
    const auto pts = geom::sample(coords, opt.samples, opt.seed);
    const auto chr = geom::christoffel(m);
    double asym = 0.0;
    for (std::size_t i = 0; i < m.n; ++i)
      for (std::size_t l = 0; l < m.n; ++l)
        for (std::size_t k = 0; k < m.n; ++k)
          asym += expr::structurally_equal(chr.gamma(i, l, k), chr.gamma(i, k, l)) ? 0.0 : 1.0;
    s.add("sphere_christoffel_symmetry", asym, 0.0);

    const auto vm = geom::vertical_metric(m, geom::VielbeinMode::Identity);
    const auto spray = geom::semispray(m, vm);
    Tensor euler({m.n});
    for (std::size_t i = 0; i < m.n; ++i) {
      Expr e = -2.0 * spray.G(i);
      for (std::size_t j = 0; j < m.n; ++j)
        e = e + expr::Expr::variable(coords.y[j]) * expr::differentiate(spray.G(i), coords.y[j]);
      euler(i) = e;
    }
    s.add("sphere_euler_homogeneity", max_abs(euler, pts), 1e-10);

    const auto nc = geom::nconnection(spray);
    const auto omega = geom::ncurvature(nc);
    s.add("sphere_omega_antisymmetry", max_abs(antisym_defect(omega, 1, 2), pts), 1e-12);

    const auto dm = geom::sasaki_dmetric(m, vm, nc);
    auto dc = geom::canonical_dconnection(dm, geom::Variant::TM);
    const auto tor = geom::dtorsion(dc, nc);
    s.add("sphere_torsion_hhh", max_abs(tor.hhh, pts), 1e-10);
    s.add("sphere_torsion_vvv", max_abs(tor.vvv, pts), 1e-10);
    Tensor om_ji(omega.shape());
    for (std::size_t a = 0; a < m.n; ++a)
      for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) om_ji(a, j, i) = omega(a, j, i);
    s.add("sphere_torsion_equals_omega", max_abs_diff(tor.vhh, om_ji, pts), 1e-10);

    if (opt.fault == "connection") dc.Lh(0, 0, 0) = dc.Lh(0, 0, 0) + expr::Expr::variable(coords.x[0]);
    s.add("sphere_metric_compatibility", geom::max_abs(geom::compat_residual(dc, dm), pts), 1e-10,
          opt.fault == "connection" ? "fault injected into L^1_11" : "");

    const auto cur = geom::dcurvature(dc, nc);
    s.add("sphere_R_antisymmetry", max_abs(antisym_defect(cur.R, 2, 3), pts), 1e-12);
  });

  s.guard("constant_blocks", [&] {
    const auto flat = diag_metric({1, 1});
    const auto coords = geom::tm_coordinates(flat);
    const auto pts = geom::sample(coords, opt.samples, opt.seed);
    Rng rng(opt.seed ^ 0xc0ffeeULL);
    double worst = 0.0, omega_max = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      geom::NConnection nc{Tensor({2, 2}), coords};
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t i = 0; i < 2; ++i) {
          const Expr x = Expr::variable(coords.x[i]), y = Expr::variable(coords.y[1 - a]);
          nc.N(a, i) = rng.uniform(-1, 1) * x * y + rng.uniform(-1, 1) * expr::sin(y) +
                       rng.uniform(-1, 1) * Expr::variable(coords.x[1 - i]) * Expr::variable(coords.y[a]);
        }
      Tensor g({2, 2}), h({2, 2});
      g(0, 0) = Expr(2.0), g(1, 1) = Expr(3.0), g(0, 1) = g(1, 0) = Expr(0.5);
      h(0, 0) = Expr(1.0), h(1, 1) = Expr(4.0), h(0, 1) = h(1, 0) = Expr(-0.25);
      const auto dm = geom::make_dmetric(g, h, nc);
      const auto dc = geom::canonical_dconnection(dm, geom::Variant::TM);
      const auto cur = geom::dcurvature(dc, nc);
      for (const Tensor* t : {&dc.Lh, &dc.Cv, &cur.R, &cur.P, &cur.S}) worst = std::max(worst, max_abs(*t, pts));
      omega_max = std::max(omega_max, max_abs(geom::ncurvature(nc), pts));
    }
    s.add("constant_blocks_zero_curvature", worst, 1e-12);
    s.add("constant_blocks_omega_nonzero", omega_max > 1e-6 ? 0.0 : 1.0, 0.0,
          "max |Omega| = " + format_double(omega_max));
  });
}

void hierarchy_suite(Suite& s, const CheckOptions& opt) {
  Rng rng(opt.seed);
  const double L = 2.0 * std::numbers::pi;
  const SpectralOps ops(256, L);

  s.guard("spectral", [&] {
    double err = 0.0, herr = 0.0;
    for (std::size_t p = 1; p <= 3; ++p) {
      const VField f = ops.D(hier::random_field(256, p, L, rng));
      err = std::max(err, hier::max_abs_diff(ops.D(ops.Dinv(f)), f));
      const VField v = hier::random_field(256, 1, L, rng), w = hier::random_field(256, 1, L, rng);
      herr = std::max(herr, hier::max_abs_diff(hier::op_H(ops, v, w), ops.D(w)));
    }
    s.add("D_Dinv_identity", err, 1e-12);
    s.add("H_reduces_to_D_for_p1", herr, 1e-14);
  });

  s.guard("recursion", [&] {
    double closed = 0.0, expanded = 0.0;
    for (std::size_t p = 1; p <= 3; ++p)
      for (int t = 0; t < 10; ++t) {
        const VField v = hier::random_field(256, p, L, rng);
        const VField r = hier::recursion_R(ops, v, ops.D(v));
        closed = std::max(closed, hier::max_abs_diff(r, hier::flow_rhs(ops, 1, v, {}, hier::K2Form::Recursion, false)));
        const VField w = hier::random_field(256, p, L, rng);
        expanded = std::max(expanded, hier::max_abs_diff(hier::recursion_R(ops, v, w), hier::recursion_R_expanded(ops, v, w)));
      }
    s.add("recursion_closed_form", closed, 1e-9);
    s.add("recursion_expanded_agreement", expanded, 1e-9);
  });

  s.guard("flow_scaling", [&] {
    const double lambda = 1.7;
    const SpectralOps scaled(256, lambda * L);
    double dev = 0.0;
    for (int k = 0; k <= 2; ++k) {
      const VField v = hier::random_field(256, 2, L, rng);
      VField sv(256, 2, lambda * L);
      for (std::size_t i = 0; i < sv.data().size(); ++i) sv.data()[i] = v.data()[i] / lambda;
      const VField a = hier::flow_rhs(scaled, k, sv, {}, hier::K2Form::Recursion, false);
      const VField b = hier::flow_rhs(ops, k, v, {}, hier::K2Form::Recursion, false);
      const double f = std::pow(lambda, -(2 * k + 2));
      double scale = 0.0;
      for (double x : b.data()) scale = std::max(scale, std::abs(x));
      for (std::size_t i = 0; i < a.data().size(); ++i)
        dev = std::max(dev, std::abs(a.data()[i] - f * b.data()[i]) / std::max(1.0, f * scale));
    }
    s.add("flow_scaling_weight", dev, 1e-9);
  });

  s.guard("structure_equations", [&] {
    double rec = 0.0, agree = 0.0;
    for (int t = 0; t < 10; ++t) {
      const std::size_t q = 1 + std::size_t(t % 3);
      const VField v = hier::random_field(256, q, L, rng);
      const VField e_perp = t % 2 ? hier::flow_rhs(ops, 1, v, {}, hier::K2Form::Recursion, false) : ops.D(v);
      const auto f = klein::reconstruct_parallel(ops, v, e_perp);
      const VField v_tau = hier::random_field(256, q, L, rng);
      const auto r = klein::structure_residuals(ops, f, v_tau);
      rec = std::max({rec, r.n1.max, r.n2.max, r.n4.max});

      klein::FrameFields g = klein::FrameFields::zero(256, q, L);
      g.v = hier::random_field(256, q, L, rng);
      g.varpi = hier::random_field(256, q, L, rng);
      g.e_par = hier::random_field(256, 1, L, rng);
      g.e_perp = hier::random_field(256, q, L, rng);
      const VField th = hier::random_field(256, q * q, L, rng);
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a + 1; b < q; ++b)
          for (std::size_t i = 0; i < 256; ++i) {
            g.theta(a * q + b, i) = th(a * q + b, i);
            g.theta(b * q + a, i) = -th(a * q + b, i);
          }
      const auto c1 = klein::structure_residuals(ops, g, v_tau);
      const auto c2 = klein::structure_residuals_matrix(ops, g, v_tau);
      agree = std::max({agree, hier::max_abs_diff(c1.r1, c2.r1), hier::max_abs_diff(c1.r2, c2.r2),
                        hier::max_abs_diff(c1.r3, c2.r3), hier::max_abs_diff(c1.r4, c2.r4)});
    }
    s.add("reconstruct_parallel_residuals", rec, 1e-10);
    s.add("structure_matrix_agreement", agree, 1e-10);
  });

  s.guard("minus1", [&] {
    pde::FlowConfig c = sg_defaults();
    const VField e0 = pde::initial_data(c);
    const SpectralOps big(c.points, c.length);
    const VField w = hier::sg_aux(big, e0);
    const auto fr = hier::sg_recover(big, w, std::vector<double>{e0(0, 0)});
    double cons = 0.0;
    for (double x : hier::conservation_residual(big, fr.e_par, fr.e_perp).data()) cons = std::max(cons, std::abs(x));
    s.add("minus1_conservation_law", cons, 1e-9);

    const VField e_par = hier::map(hier::norm2(e0), [](double x) { return std::sqrt(1.0 - x); });
    const VField v = hier::scale(hier::map(e_par, [](double x) { return 1.0 / x; }), big.D(e0));
    const VField v_tau = -1.0 * e0;
    s.add("minus1_manufactured_residual", hier::minus1_residual(big, v, v_tau).max_norm(), 1e-8);
  });

  s.guard("conservation_k1", [&] {
    pde::FlowConfig c;
    c.initial = "soliton-pair";
    const auto d = pde::conservation_series(pde::integrate_flow(c));
    s.add("k1_drift_H0", d.h0, 1e-6);
    s.add("k1_drift_H1", d.h1, 1e-6);
    s.add("k1_one_H2_conserved", d.conserved_h2 == "a" || d.conserved_h2 == "b" ? 0.0 : 1.0, 0.0,
          "conserved variant: " + d.conserved_h2 + ", drift a=" + format_double(d.h2a) + " b=" + format_double(d.h2b));
  });

  s.guard("sg_constraint", [&] {
    const auto d = pde::conservation_series(pde::integrate_flow(sg_defaults()));
    s.add("sg_frame_constraint", d.constraint, 1e-6);
  });

  s.guard("rk4_order", [&] {
    pde::FlowConfig c;
    c.points = 256;
    c.dt = 1e-3;
    c.tau_end = 0.2;
    const auto o = pde::rk4_order_check(c);
    s.add("rk4_order_ratio", std::abs(o.ratio - 16.0), 4.0, "ratio " + format_double(o.ratio));
  });
}

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& opt) {
  if (opt.suite != "geometry" && opt.suite != "hierarchy" && opt.suite != "all")
    throw ConfigError("suite must be geometry, hierarchy or all");
  Suite s;
  if (opt.suite != "hierarchy") geometry_suite(s, opt);
  if (opt.suite != "geometry") hierarchy_suite(s, opt);
  return s.results;
}

Json check_report(const CheckOptions& opt, const std::vector<CheckResult>& results) {
  Json checks = Json::array();
  bool pass = true;
  for (const auto& r : results) {
    pass = pass && r.pass;
    Json c = Json::object();
    c.set("name", r.name).set("value", r.value).set("tolerance", r.tolerance).set("pass", r.pass);
    if (!r.detail.empty()) c.set("detail", r.detail);
    checks.push(std::move(c));
  }
  Json j = Json::object();
  j.set("suite", opt.suite).set("samples", opt.samples).set("seed", std::int64_t(opt.seed));
  if (!opt.fault.empty()) j.set("fault", opt.fault);
  j.set("checks", std::move(checks)).set("pass", pass);
  return j;
}

}  // namespace nsolit::cli
