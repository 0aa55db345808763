#include "nsolit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "nsolit/parallel.hpp"

namespace nsolit {

std::size_t thread_budget() {
  if (const char* env = std::getenv("NSOLIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return std::size_t(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

SamplePoints sample_box(std::vector<std::string> vars, const std::vector<expr::Interval>& box, std::size_t count,
                        std::uint64_t seed) {
  if (box.size() != vars.size()) throw DimensionMismatch("box does not match variables");
  Rng rng(seed);
  SamplePoints s{std::move(vars), {}};
  s.points.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    std::vector<double> x(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) x[k] = rng.uniform(box[k].lo, box[k].hi);
    s.points.push_back(std::move(x));
  }
  return s;
}

std::vector<std::vector<double>> evaluate_tensor(const Tensor& t, const SamplePoints& s) {
  const expr::Compiled c(t.data(), s.vars);
  std::vector<std::vector<double>> out(s.points.size());
  parallel_for(s.points.size(), [&](std::size_t p) { out[p] = c.eval(s.points[p]); });
  return out;
}

double max_abs(const Tensor& t, const SamplePoints& s) {
  double m = 0.0;
  for (const auto& row : evaluate_tensor(t, s))
    for (double v : row) m = std::isnan(v) ? v : std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b, const SamplePoints& s) {
  if (a.shape() != b.shape()) throw DimensionMismatch("tensor shapes differ");
  const auto va = evaluate_tensor(a, s);
  const auto vb = evaluate_tensor(b, s);
  double m = 0.0;
  for (std::size_t p = 0; p < va.size(); ++p)
    for (std::size_t k = 0; k < va[p].size(); ++k) {
      const double d = std::abs(va[p][k] - vb[p][k]);
      m = std::isnan(d) ? d : std::max(m, d);
    }
  return m;
}

}  // namespace nsolit
