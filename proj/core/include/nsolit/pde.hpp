#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsolit/field.hpp"
#include "nsolit/hierarchy.hpp"

namespace nsolit::pde {

using hier::VField;

/// mkdv: flow k of the hierarchy for v.
/// sg: sine-Gordon for e_perp, stepping w = (1-|e_perp|^2)^{-1/2} e_perp_l.
/// minus1: the same system reported through v = w, which satisfies v_tau = -e_perp.
enum class FlowKind { Mkdv, SineGordon, Minus1 };

[[nodiscard]] std::string to_string(FlowKind k);
[[nodiscard]] FlowKind flow_kind_from_string(const std::string& s);

struct FlowConfig {
  FlowKind kind = FlowKind::Mkdv;
  int k = 1;
  std::size_t p = 1;
  std::size_t points = 512;
  double length = 62.83185307179586;  // 20 pi
  double dt = 1e-4;
  double tau_end = 0.5;
  double kappa = 0.0;
  /// Preset name (zero, sin, soliton, soliton-pair, breather, sg-singular) or a CSV path.
  std::string initial = "soliton";
  /// Soliton parameter a in 2a sech(a l).
  double amplitude = 1.0;
  /// Steps between snapshots; 0 keeps only the first and last.
  std::size_t cadence = 0;
  hier::K2Form k2_form = hier::K2Form::Recursion;
  bool dealias = true;

  /// Throws InvalidArgument on inconsistent settings.
  void validate() const;
  [[nodiscard]] std::size_t steps() const;
};

/// Initial field for the config: v for mkdv, e_perp for sg and minus1.
[[nodiscard]] VField initial_data(const FlowConfig& cfg);

struct Diagnostics {
  double tau = 0.0;
  double h0 = 0.0, h1 = 0.0, h2a = 0.0, h2b = 0.0;
  double max_norm = 0.0;
  /// max |e_par^2 + |e_perp|^2 - 1| for sg and minus1, 0 otherwise.
  double constraint = 0.0;
};

struct Snapshot {
  double tau = 0.0;
  VField field;
};

struct Trajectory {
  FlowConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<Diagnostics> diagnostics;
};

/// Fixed-step RK4 with pseudospectral derivatives. Throws IntegrationFailure
/// (BlowUp if |v|_inf > 1e6 or non-finite, Singularity if |e_perp| >= 1).
[[nodiscard]] Trajectory integrate_flow(const FlowConfig& cfg);
/// As above from explicit initial data (v, or e_perp for sg/minus1).
[[nodiscard]] Trajectory integrate_flow(const FlowConfig& cfg, const VField& initial);

struct DriftReport {
  double h0 = 0.0, h1 = 0.0, h2a = 0.0, h2b = 0.0;
  double constraint = 0.0;
  /// "a", "b", "both" or "none" by the 1e-5 threshold.
  std::string conserved_h2;
};

/// Max relative drift |H(tau) - H(0)| / |H(0)| (absolute when H(0) = 0).
[[nodiscard]] DriftReport conservation_series(const Trajectory& t);

/// Max deviation between lambda^-1 v(tau) and the run from lambda^-1 v0(l/lambda)
/// on the domain lambda L with dt lambda^{2k+1}. Requires kappa = 0 and lambda in [0.5, 2].
[[nodiscard]] double scaling_check(const FlowConfig& cfg, double lambda);

struct OrderCheck {
  double err_dt = 0.0;
  double err_half = 0.0;
  double ratio = 0.0;
};

/// Terminal-state errors at dt and dt/2 against a dt/4 reference.
[[nodiscard]] OrderCheck rk4_order_check(const FlowConfig& cfg);

/// Diagnostics as CSV: tau,H0,H1,H2a,H2b,maxnorm[,constraint].
[[nodiscard]] std::string diagnostics_csv(const Trajectory& t);

}  // namespace nsolit::pde
