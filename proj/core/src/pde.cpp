#include "nsolit/pde.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <numbers>

#include "nsolit/errors.hpp"
#include "nsolit/json_writer.hpp"

namespace nsolit::pde {

using hier::SpectralOps;
using Failure = IntegrationFailure;

std::string to_string(FlowKind k) {
  switch (k) {
    case FlowKind::Mkdv: return "mkdv";
    case FlowKind::SineGordon: return "sg";
    case FlowKind::Minus1: return "minus1";
  }
  return "mkdv";
}

FlowKind flow_kind_from_string(const std::string& s) {
  if (s == "mkdv") return FlowKind::Mkdv;
  if (s == "sg") return FlowKind::SineGordon;
  if (s == "minus1") return FlowKind::Minus1;
  throw InvalidArgument("unknown flow kind '" + s + "' (expected mkdv, sg or minus1)");
}

void FlowConfig::validate() const {
  if (kind == FlowKind::Mkdv && (k < 0 || k > 2)) throw InvalidArgument("k must be 0, 1 or 2");
  if (p < 1) throw InvalidArgument("p must be at least 1");
  if (points < 8 || (points & (points - 1)) != 0) throw InvalidArgument("N must be a power of two >= 8");
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("domain length must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(tau_end >= 0.0) || !std::isfinite(tau_end)) throw InvalidArgument("tau_end must be non-negative");
  if (!std::isfinite(kappa)) throw InvalidArgument("kappa must be finite");
  const double s = tau_end / dt;
  if (std::abs(s - std::round(s)) > 1e-9 * std::max(1.0, s))
    throw InvalidArgument("tau_end must be a whole number of steps");
}

std::size_t FlowConfig::steps() const { return std::size_t(std::llround(tau_end / dt)); }

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

// Sine-Gordon breather at tau = 0, standing on the light cone.
double breather_angle(double l) {
  const double om = 0.95;
  const double gam = std::sqrt(1.0 - om * om);
  const double beta = gam / om;
  return 4.0 * std::atan(beta * std::sin(om * l) / std::cosh(gam * l));
}

VField preset(const FlowConfig& cfg) {
  const auto first = [&](const std::function<double(double)>& f) {
    return VField::sample(cfg.points, cfg.p, cfg.length, [&](double l) {
      std::vector<double> x(cfg.p, 0.0);
      x[0] = f(l);
      return x;
    });
  };
  const double a = cfg.amplitude;
  const std::string& name = cfg.initial;
  if (name == "zero") return VField(cfg.points, cfg.p, cfg.length);
  if (name == "sin") return first([&](double l) { return std::sin(2.0 * std::numbers::pi * l / cfg.length); });
  if (name == "soliton") return first([&](double l) { return 2.0 * a * sech(a * l); });
  if (name == "soliton-pair")
    return first([](double l) { return 2.0 * sech(l + 1.0) + 1.6 * sech(0.8 * (l - 1.0)); });
  if (name == "breather") return first([](double l) { return std::sin(breather_angle(l)); });
  if (name == "sg-singular") return first([](double l) { return sech(l); });
  return {};
}

double max_constraint(const VField& e_par, const VField& e_perp) {
  const VField ee = hier::norm2(e_perp);
  double m = 0.0;
  for (std::size_t j = 0; j < ee.points(); ++j) {
    const double d = std::abs(e_par(0, j) * e_par(0, j) + ee(0, j) - 1.0);
    m = std::isnan(d) ? d : std::max(m, d);
  }
  return m;
}

Diagnostics diagnose(const SpectralOps& ops, double tau, const VField& v) {
  Diagnostics d;
  d.tau = tau;
  d.h0 = hier::hamiltonian(ops, 0, v);
  d.h1 = hier::hamiltonian(ops, 1, v);
  d.h2a = hier::hamiltonian(ops, 2, v, hier::H2Variant::SquaredCross);
  d.h2b = hier::hamiltonian(ops, 2, v, hier::H2Variant::LinearCross);
  d.max_norm = v.max_norm();
  return d;
}

VField rk4_step(const std::function<VField(const VField&)>& f, const VField& u, double dt) {
  const VField k1 = f(u);
  const VField k2 = f(hier::axpy(u, 0.5 * dt, k1));
  const VField k3 = f(hier::axpy(u, 0.5 * dt, k2));
  const VField k4 = f(hier::axpy(u, dt, k3));
  VField r = u;
  auto& x = r.data();
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] += dt / 6.0 * (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] + k4.data()[i]);
  return r;
}

void check_frame(const VField& e_perp, double tau) {
  const VField ee = hier::norm2(e_perp);
  for (std::size_t j = 0; j < ee.points(); ++j)
    if (!(ee(0, j) < 1.0))
      throw Failure(Failure::Kind::Singularity, tau, "|e_perp| >= 1 at l=" + std::to_string(ee.l(j)));
}

Trajectory run_mkdv(const FlowConfig& cfg, const SpectralOps& ops, VField v) {
  Trajectory t{cfg, {}, {}};
  if (cfg.dealias) v = ops.dealiased(std::move(v));
  const hier::HierarchyConst c{cfg.kappa};
  const auto f = [&](const VField& u) { return hier::flow_rhs(ops, cfg.k, u, c, cfg.k2_form, cfg.dealias); };
  const auto record = [&](double tau, const VField& u) {
    t.snapshots.push_back({tau, u});
    t.diagnostics.push_back(diagnose(ops, tau, u));
  };
  record(0.0, v);
  const std::size_t steps = cfg.steps();
  for (std::size_t s = 1; s <= steps; ++s) {
    const double tau = double(s) * cfg.dt;
    v = rk4_step(f, v, cfg.dt);
    const double m = v.max_norm();
    if (!v.finite() || !(m <= 1e6)) throw Failure(Failure::Kind::BlowUp, tau, "solution blew up");
    if (s == steps || (cfg.cadence > 0 && s % cfg.cadence == 0)) record(tau, v);
  }
  return t;
}

Trajectory run_sg(const FlowConfig& cfg, const SpectralOps& ops, const VField& e0) {
  Trajectory t{cfg, {}, {}};
  check_frame(e0, 0.0);
  std::vector<double> edge(e0.dim());
  for (std::size_t c = 0; c < e0.dim(); ++c) edge[c] = e0(c, 0);

  double tau = 0.0;
  const auto recover = [&](const VField& w) {
    try {
      auto fr = hier::sg_recover(ops, w, edge);
      check_frame(fr.e_perp, tau);
      return fr;
    } catch (const Failure& e) {
      if (e.kind != Failure::Kind::Convergence) throw;
      throw Failure(e.kind, tau, "sine-Gordon frame recovery did not converge");
    } catch (const DomainError& e) {
      throw Failure(Failure::Kind::Singularity, tau, e.what());
    }
  };
  const auto record = [&](const VField& w) {
    const auto fr = recover(w);
    Diagnostics d = diagnose(ops, tau, w);
    d.constraint = max_constraint(fr.e_par, fr.e_perp);
    t.snapshots.push_back({tau, cfg.kind == FlowKind::Minus1 ? w : fr.e_perp});
    t.diagnostics.push_back(d);
  };

  VField w = hier::sg_aux(ops, e0);
  record(w);
  const auto f = [&](const VField& u) { return -1.0 * recover(u).e_perp; };
  const std::size_t steps = cfg.steps();
  for (std::size_t s = 1; s <= steps; ++s) {
    tau = double(s - 1) * cfg.dt;
    w = rk4_step(f, w, cfg.dt);
    tau = double(s) * cfg.dt;
    if (!w.finite() || !(w.max_norm() <= 1e6)) throw Failure(Failure::Kind::BlowUp, tau, "solution blew up");
    if (s == steps || (cfg.cadence > 0 && s % cfg.cadence == 0)) record(w);
  }
  return t;
}

double relative_drift(const std::vector<Diagnostics>& ds, double Diagnostics::*field) {
  const double h0 = ds.front().*field;
  double m = 0.0;
  for (const auto& d : ds) m = std::max(m, std::abs(d.*field - h0));
  return h0 != 0.0 ? m / std::abs(h0) : m;
}

}  // namespace

VField initial_data(const FlowConfig& cfg) {
  cfg.validate();
  VField v = preset(cfg);
  if (v.points() != 0) return v;
  v = hier::read_csv(cfg.initial);
  if (v.points() != cfg.points || v.dim() != cfg.p || std::abs(v.length() - cfg.length) > 1e-9 * cfg.length)
    throw InvalidArgument("initial CSV '" + cfg.initial + "' does not match N, p and domain length");
  VField exact(cfg.points, cfg.p, cfg.length);
  exact.data() = v.data();
  return exact;
}

Trajectory integrate_flow(const FlowConfig& cfg) { return integrate_flow(cfg, initial_data(cfg)); }

Trajectory integrate_flow(const FlowConfig& cfg, const VField& initial) {
  cfg.validate();
  if (initial.points() != cfg.points || initial.dim() != cfg.p || initial.length() != cfg.length)
    throw DimensionMismatch("initial data does not match the configured grid");
  const SpectralOps ops(cfg.points, cfg.length);
  if (cfg.kind == FlowKind::Mkdv) return run_mkdv(cfg, ops, initial);
  return run_sg(cfg, ops, initial);
}

DriftReport conservation_series(const Trajectory& t) {
  DriftReport r;
  if (t.diagnostics.size() < 2) throw InvalidArgument("drift needs at least two snapshots");
  r.h0 = relative_drift(t.diagnostics, &Diagnostics::h0);
  r.h1 = relative_drift(t.diagnostics, &Diagnostics::h1);
  r.h2a = relative_drift(t.diagnostics, &Diagnostics::h2a);
  r.h2b = relative_drift(t.diagnostics, &Diagnostics::h2b);
  for (const auto& d : t.diagnostics) r.constraint = std::max(r.constraint, d.constraint);
  const bool a = r.h2a <= 1e-5, b = r.h2b <= 1e-5;
  r.conserved_h2 = a && b ? "both" : a ? "a" : b ? "b" : "none";
  return r;
}

double scaling_check(const FlowConfig& cfg, double lambda) {
  if (cfg.kind != FlowKind::Mkdv) throw InvalidArgument("scaling check applies to the mkdv flows");
  if (cfg.kappa != 0.0) throw InvalidArgument("scaling check requires kappa = 0");
  if (!(lambda >= 0.5 && lambda <= 2.0)) throw InvalidArgument("lambda must lie in [0.5, 2]");
  FlowConfig base = cfg;
  base.cadence = 0;
  const VField v0 = initial_data(base);

  const double w = std::pow(lambda, 2 * cfg.k + 1);
  FlowConfig scaled = base;
  scaled.length = lambda * base.length;
  scaled.dt = w * base.dt;
  scaled.tau_end = w * base.tau_end;
  VField s0(base.points, base.p, scaled.length);
  for (std::size_t i = 0; i < s0.data().size(); ++i) s0.data()[i] = v0.data()[i] / lambda;

  auto scaled_run = std::async(std::launch::async, [&] { return integrate_flow(scaled, s0); });
  const Trajectory a = integrate_flow(base, v0);
  const Trajectory b = scaled_run.get();
  const VField& va = a.snapshots.back().field;
  const VField& vb = b.snapshots.back().field;
  double m = 0.0;
  for (std::size_t i = 0; i < va.data().size(); ++i) m = std::max(m, std::abs(va.data()[i] / lambda - vb.data()[i]));
  return m;
}

OrderCheck rk4_order_check(const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.cadence = 0;
  const VField v0 = initial_data(c);
  const auto final_state = [&](double dt) {
    FlowConfig r = c;
    r.dt = dt;
    return integrate_flow(r, v0).snapshots.back().field;
  };
  const VField ref = final_state(cfg.dt / 4.0);
  OrderCheck o;
  o.err_dt = hier::max_abs_diff(final_state(cfg.dt), ref);
  o.err_half = hier::max_abs_diff(final_state(cfg.dt / 2.0), ref);
  o.ratio = o.err_dt / o.err_half;
  return o;
}

std::string diagnostics_csv(const Trajectory& t) {
  const bool frame = t.config.kind != FlowKind::Mkdv;
  std::string out = frame ? "tau,H0,H1,H2a,H2b,maxnorm,constraint\n" : "tau,H0,H1,H2a,H2b,maxnorm\n";
  for (const auto& d : t.diagnostics) {
    out += format_double(d.tau) + "," + format_double(d.h0) + "," + format_double(d.h1) + "," +
           format_double(d.h2a) + "," + format_double(d.h2b) + "," + format_double(d.max_norm);
    if (frame) out += "," + format_double(d.constraint);
    out += "\n";
  }
  return out;
}

}  // namespace nsolit::pde
