#include "nsolit/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

namespace nsolit::hier {

namespace {
// FFTW's planner is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

struct SpectralOps::Plans {
  std::size_t n;
  double length;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  Plans(std::size_t points, double len) : n(points), length(len) {
    std::vector<double> r(n);
    std::vector<std::complex<double>> c(n / 2 + 1);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd = fftw_plan_dft_r2c_1d(int(n), r.data(), cp, flags);
    bwd = fftw_plan_dft_c2r_1d(int(n), cp, r.data(), flags);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  std::vector<std::complex<double>> forward(std::span<const double> f) const {
    std::vector<double> in(f.begin(), f.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_execute_dft_r2c(fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
  }
  void backward(std::vector<std::complex<double>>& c, std::span<double> out) const {
    std::vector<double> r(n);
    fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(c.data()), r.data());
    const double s = 1.0 / double(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = r[j] * s;
  }
};

SpectralOps::SpectralOps(std::size_t points, double length) {
  if (points < 8 || (points & (points - 1)) != 0) throw InvalidArgument("grid size must be a power of two >= 8");
  if (!(length > 0.0)) throw InvalidArgument("domain length must be positive");
  plans_ = std::make_shared<const Plans>(points, length);
}

std::size_t SpectralOps::points() const { return plans_->n; }
double SpectralOps::length() const { return plans_->length; }

double SpectralOps::wavenumber(std::size_t k) const {
  return 2.0 * std::numbers::pi * double(k) / plans_->length;
}

double SpectralOps::mean(std::span<const double> f) {
  double s = 0.0;
  for (double x : f) s += x;
  return s / double(f.size());
}

void SpectralOps::derivative(std::span<const double> f, std::span<double> out, int order) const {
  const std::size_t n = plans_->n;
  if (f.size() != n || out.size() != n) throw DimensionMismatch("field size does not match spectral grid");
  if (order < 0) throw InvalidArgument("negative derivative order");
  auto c = plans_->forward(f);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const std::complex<double> ik(0.0, wavenumber(k));
    std::complex<double> m = 1.0;
    for (int o = 0; o < order; ++o) m *= ik;
    c[k] *= m;
  }
  if (order > 0) c[n / 2] = 0.0;
  plans_->backward(c, out);
}

void SpectralOps::antiderivative_projected(std::span<const double> f, std::span<double> out) const {
  const std::size_t n = plans_->n;
  if (f.size() != n || out.size() != n) throw DimensionMismatch("field size does not match spectral grid");
  auto c = plans_->forward(f);
  c[0] = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) c[k] /= std::complex<double>(0.0, wavenumber(k));
  c[n / 2] = 0.0;
  plans_->backward(c, out);
  const double anchor = out[0];
  for (double& x : out) x -= anchor;
}

void SpectralOps::antiderivative(std::span<const double> f, std::span<double> out) const {
  double inf = 0.0;
  for (double x : f) inf = std::max(inf, std::abs(x));
  const double m = mean(f);
  if (!(std::abs(m) <= 1e-10 * std::max(1.0, inf)))
    throw NonzeroMean("D^-1 of a field with mean " + std::to_string(m));
  antiderivative_projected(f, out);
}

void SpectralOps::dealias(std::span<double> f) const {
  const std::size_t n = plans_->n;
  if (f.size() != n) throw DimensionMismatch("field size does not match spectral grid");
  auto c = plans_->forward(f);
  for (std::size_t k = n / 3 + 1; k < c.size(); ++k) c[k] = 0.0;
  plans_->backward(c, f);
}

VField SpectralOps::D(const VField& f, int order) const {
  VField r(f.points(), f.dim(), f.length());
  for (std::size_t c = 0; c < f.dim(); ++c) derivative(f.comp(c), r.comp(c), order);
  return r;
}

VField SpectralOps::Dinv(const VField& f) const {
  VField r(f.points(), f.dim(), f.length());
  for (std::size_t c = 0; c < f.dim(); ++c) antiderivative(f.comp(c), r.comp(c));
  return r;
}

VField SpectralOps::dealiased(VField f) const {
  for (std::size_t c = 0; c < f.dim(); ++c) dealias(f.comp(c));
  return f;
}

}  // namespace nsolit::hier
