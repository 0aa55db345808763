#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nsolit/field.hpp"

namespace nsolit::hier {

/// Fourier pseudospectral operators on the periodic grid of length L with N points.
/// Copies share the FFTW plans; buffers are allocated per call, so one instance
/// may be used from several threads.
class SpectralOps {
 public:
  SpectralOps(std::size_t points, double length);
  explicit SpectralOps(const VField& like) : SpectralOps(like.points(), like.length()) {}

  [[nodiscard]] std::size_t points() const;
  [[nodiscard]] double length() const;
  /// Angular wavenumber of mode index k in [0, N/2].
  [[nodiscard]] double wavenumber(std::size_t k) const;

  /// order-th derivative; the Nyquist mode is dropped.
  void derivative(std::span<const double> f, std::span<double> out, int order = 1) const;
  /// Antiderivative anchored at the left grid edge: F(l_0) = 0.
  /// Throws NonzeroMean if |mean f| > 1e-10 max(1, |f|_inf).
  void antiderivative(std::span<const double> f, std::span<double> out) const;
  /// As antiderivative, but silently integrates f - mean(f).
  void antiderivative_projected(std::span<const double> f, std::span<double> out) const;
  /// 2/3-rule: zero every mode with index above N/3.
  void dealias(std::span<double> f) const;

  [[nodiscard]] VField D(const VField& f, int order = 1) const;
  [[nodiscard]] VField Dinv(const VField& f) const;
  [[nodiscard]] VField dealiased(VField f) const;

  static double mean(std::span<const double> f);

 private:
  struct Plans;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace nsolit::hier
