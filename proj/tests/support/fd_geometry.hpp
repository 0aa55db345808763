#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsolit/metric.hpp"

namespace nsolit::oracle {

using Vec = std::vector<double>;

/// Numerical evaluation of the tangent-bundle geometry of a metric by central
/// differences, independent of the symbolic pipeline. Points are z = (x, y).
/// Layouts are row-major and match the symbolic tables.
class FdGeometry {
 public:
  explicit FdGeometry(const expr::MetricSpec& m, double step = 1e-5);

  [[nodiscard]] std::size_t n() const { return n_; }

  [[nodiscard]] Vec metric(const Vec& z) const;
  [[nodiscard]] Vec gamma(const Vec& z) const;
  [[nodiscard]] Vec spray(const Vec& z) const;
  [[nodiscard]] Vec nconn(const Vec& z) const;
  /// From the commutator of the adapted frame fields applied to coordinates.
  [[nodiscard]] Vec anholonomy(const Vec& z) const;
  [[nodiscard]] Vec omega(const Vec& z) const;
  [[nodiscard]] Vec lh(const Vec& z) const;
  [[nodiscard]] Vec cv(const Vec& z) const;

  /// Every table under the names used by the CLI bundle.
  [[nodiscard]] std::map<std::string, Vec> tables(const Vec& z) const;

 private:
  template <class F>
  Vec partial(const F& f, const Vec& z, std::size_t var) const;
  template <class F>
  Vec horizontal(const F& f, const Vec& z, std::size_t i) const;

  std::size_t n_;
  double h_;
  expr::MetricSpec spec_;
};

/// True for the tables compared at the looser second-derivative tolerance.
[[nodiscard]] bool second_order_table(const std::string& name);

}  // namespace nsolit::oracle
