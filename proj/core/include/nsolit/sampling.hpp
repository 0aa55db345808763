#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nsolit/metric.hpp"
#include "nsolit/tensor.hpp"

namespace nsolit {

/// Portable uniform doubles: mt19937_64 with an explicit 53-bit mapping.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

struct SamplePoints {
  std::vector<std::string> vars;
  std::vector<std::vector<double>> points;
};

/// Uniform points in a box, one interval per variable.
[[nodiscard]] SamplePoints sample_box(std::vector<std::string> vars, const std::vector<expr::Interval>& box,
                                      std::size_t count, std::uint64_t seed);

/// Tensor values per point: result[p][flat entry]. Evaluated in parallel.
[[nodiscard]] std::vector<std::vector<double>> evaluate_tensor(const Tensor& t, const SamplePoints& s);

/// Max |entry| over all entries and points.
[[nodiscard]] double max_abs(const Tensor& t, const SamplePoints& s);

/// Max |a - b| entrywise over all points.
[[nodiscard]] double max_abs_diff(const Tensor& a, const Tensor& b, const SamplePoints& s);

}  // namespace nsolit
