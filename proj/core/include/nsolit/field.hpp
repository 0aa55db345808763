#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nsolit/errors.hpp"
#include "nsolit/sampling.hpp"

namespace nsolit::hier {

/// p-component periodic grid field. Grid points l_j = -L/2 + j L/N.
/// Storage is component-major: data[c*N + j].
class VField {
 public:
  VField() = default;
  VField(std::size_t points, std::size_t dim, double length);

  /// Samples f(l) (returning dim values) on the grid.
  static VField sample(std::size_t points, std::size_t dim, double length,
                       const std::function<std::vector<double>(double)>& f);

  [[nodiscard]] std::size_t points() const { return n_; }
  [[nodiscard]] std::size_t dim() const { return p_; }
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] double spacing() const { return length_ / double(n_); }
  [[nodiscard]] double l(std::size_t j) const { return -0.5 * length_ + double(j) * spacing(); }

  [[nodiscard]] std::span<double> comp(std::size_t c) { return {data_.data() + c * n_, n_}; }
  [[nodiscard]] std::span<const double> comp(std::size_t c) const { return {data_.data() + c * n_, n_}; }
  double& operator()(std::size_t c, std::size_t j) { return data_[c * n_ + j]; }
  double operator()(std::size_t c, std::size_t j) const { return data_[c * n_ + j]; }
  [[nodiscard]] std::vector<double>& data() { return data_; }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }

  [[nodiscard]] bool same_grid(const VField& o) const { return n_ == o.n_ && length_ == o.length_; }
  /// Throws DimensionMismatch unless grids (and optionally dims) agree.
  void require_grid(const VField& o, bool same_dim = true) const;
  /// max_j |v(l_j)|
  [[nodiscard]] double max_norm() const;
  [[nodiscard]] bool finite() const;

  VField& operator+=(const VField& o);
  VField& operator-=(const VField& o);
  VField& operator*=(double s);

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  double length_ = 0.0;
  std::vector<double> data_;
};

VField operator+(VField a, const VField& b);
VField operator-(VField a, const VField& b);
VField operator*(double s, VField a);
/// a + s*b
VField axpy(const VField& a, double s, const VField& b);

/// Pointwise dot product as a scalar field.
[[nodiscard]] VField dot(const VField& a, const VField& b);
/// |a|^2 pointwise.
[[nodiscard]] VField norm2(const VField& a);
/// Scalar field times vector field, pointwise.
[[nodiscard]] VField scale(const VField& s, const VField& v);
/// Pointwise product of two scalar fields.
[[nodiscard]] VField mul(const VField& a, const VField& b);
/// Apply f to every value.
[[nodiscard]] VField map(const VField& a, const std::function<double(double)>& f);
/// max |a - b| over all values.
[[nodiscard]] double max_abs_diff(const VField& a, const VField& b);

/// Random trigonometric polynomial with modes 1..`modes` of the domain and
/// amplitudes decaying like 1/m, shifted so that every component vanishes at l_0.
[[nodiscard]] VField random_field(std::size_t points, std::size_t dim, double length, Rng& rng, int modes = 6);

/// CSV with header `l,v1,...,vp` and %.12e values.
[[nodiscard]] std::string to_csv(const VField& v);
void write_csv(const VField& v, const std::string& path);
/// Reads `l,v1..vp`; grid length is inferred as N*(l1 - l0). Grid must be uniform.
[[nodiscard]] VField read_csv(const std::string& path);

}  // namespace nsolit::hier
