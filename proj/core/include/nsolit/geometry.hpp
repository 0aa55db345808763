#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nsolit/metric.hpp"
#include "nsolit/sampling.hpp"
#include "nsolit/tensor.hpp"

namespace nsolit::geom {

using expr::Expr;
using expr::MetricSpec;

/// Base coordinates x and fibre coordinates y on TM, with sample boxes.
struct Coordinates {
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::vector<expr::Interval> xbox;
  std::vector<expr::Interval> ybox;

  [[nodiscard]] std::size_t n() const { return x.size(); }
  [[nodiscard]] std::size_t m() const { return y.size(); }
  [[nodiscard]] std::vector<std::string> all() const;
  [[nodiscard]] std::vector<expr::Interval> box() const;
};

/// x from the metric, y1..yn on [-1, 1].
[[nodiscard]] Coordinates tm_coordinates(const MetricSpec& m);
[[nodiscard]] SamplePoints sample(const Coordinates& c, std::size_t count, std::uint64_t seed);

/// Symbolic inverse g^ij; throws SingularMatrix.
[[nodiscard]] Tensor inverse_metric(const MetricSpec& m);
/// Throws SingularMatrix if det g vanishes (|det| <= 1e-12) at any sample point.
void check_nondegenerate(const MetricSpec& m, const SamplePoints& s);

struct Christoffel {
  Tensor gamma;  // gamma(i, l, m) = γ^i_lm, entries (l,m) and (m,l) share nodes
};
[[nodiscard]] Christoffel christoffel(const MetricSpec& m);

enum class VielbeinMode { Identity, ConstantHessian };

struct VerticalMetric {
  Tensor gtilde;  // ½ ∂²L/∂y^a∂y^b
  Expr lagrangian;  // L(x, y), quadratic in y
  bool regular = true;
  Coordinates coords;
};

/// Identity: L = g_ab(x) y^a y^b. ConstantHessian: L = c_ab y^a y^b with `hessian` = c.
/// Throws DegenerateHessian if det g~ vanishes at a sample point.
[[nodiscard]] VerticalMetric vertical_metric(const MetricSpec& m, VielbeinMode mode,
                                             const std::vector<std::vector<double>>& hessian = {});

/// Printed:    G^i = ¼ g~^ij g_jk γ^k_lm y^l y^m
/// Lagrangian: G^i = ¼ g~^ij (∂²L/∂y^j∂x^k y^k − ∂L/∂x^j), which is ½ γ^i_lm y^l y^m when g~ = g
enum class SemisprayConvention { Printed, Lagrangian };

struct Semispray {
  Tensor G;  // G(i)
  Coordinates coords;
  SemisprayConvention convention = SemisprayConvention::Printed;
};
[[nodiscard]] Semispray semispray(const MetricSpec& m, const VerticalMetric& v,
                                  SemisprayConvention convention = SemisprayConvention::Printed);

/// dx = y, dy = -2 G(x, y), compiled once.
class GeodesicField {
 public:
  explicit GeodesicField(const Semispray& s);
  void operator()(std::span<const double> x, std::span<const double> y, std::span<double> dx,
                  std::span<double> dy) const;
  [[nodiscard]] std::size_t dim() const { return n_; }

 private:
  std::size_t n_;
  expr::Compiled g_;
};

struct GeodesicDerivative {
  std::vector<double> dx;
  std::vector<double> dy;
};
[[nodiscard]] GeodesicDerivative geodesic_rhs(const Semispray& s, std::span<const double> x,
                                              std::span<const double> y);

/// Classical RK4 on (x, y); returns the x samples (steps + 1 rows).
[[nodiscard]] std::vector<std::vector<double>> integrate_geodesic(const GeodesicField& f,
                                                                  std::vector<double> x,
                                                                  std::vector<double> y, double dt,
                                                                  std::size_t steps);

/// d/dτ(∂L/∂y) − ∂L/∂x along sampled x(τ) with spacing dtau. Derivatives use
/// fourth-order differences (one-sided near the ends), so at least 6 samples. One row per sample.
[[nodiscard]] std::vector<std::vector<double>> euler_lagrange_residual(
    const VerticalMetric& v, const std::vector<std::vector<double>>& path, double dtau);

struct NConnection {
  Tensor N;  // N(a, i) = N^a_i
  Coordinates coords;
};
[[nodiscard]] NConnection nconnection(const Semispray& s);

/// Frame slot: horizontal e_i or vertical e_a.
struct Slot {
  bool vertical = false;
  std::size_t index = 0;
  static Slot h(std::size_t i) { return {false, i}; }
  static Slot v(std::size_t a) { return {true, a}; }
};

/// e_i f = ∂f/∂x^i − N^a_i ∂f/∂y^a, e_a f = ∂f/∂y^a.
[[nodiscard]] Expr adapted_derivative(const NConnection& N, const Expr& f, Slot slot);

/// Frame index α in [0, n) is horizontal, [n, n+m) vertical.
struct Anholonomy {
  Tensor W;  // W(γ, α, β): [e_α, e_β] = W^γ_αβ e_γ
};
[[nodiscard]] Anholonomy anholonomy(const NConnection& N);

/// Ω(a, i, j) = ∂_j N^a_i − ∂_i N^a_j + N^b_i ∂_b N^a_j − N^b_j ∂_b N^a_i
[[nodiscard]] Tensor ncurvature(const NConnection& N);

}  // namespace nsolit::geom
