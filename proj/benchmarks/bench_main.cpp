#include <benchmark/benchmark.h>

#include <numbers>

#include "nsolit/dconnection.hpp"
#include "nsolit/geometry.hpp"
#include "nsolit/hierarchy.hpp"
#include "nsolit/pde.hpp"

using namespace nsolit;

namespace {

const char* kSphere =
    "dim 2; coords x1, x2; box x1 in [0.3, 2.8]; box x2 in [0, 6.2];\n"
    "g[1][1] = 1; g[2][2] = sin(x1)^2;";

void BM_Simplify(benchmark::State& state) {
  const std::vector<std::string> vars = {"x", "y"};
  const auto e = expr::differentiate(
      expr::parse_expr("sin(x*y)^2 * exp(x - y) / (1 + x^2) + 0*y + 1*x^3 - x^3", vars), "x");
  for (auto _ : state) benchmark::DoNotOptimize(expr::simplify_basic(e));
}
BENCHMARK(BM_Simplify);

void BM_Christoffel(benchmark::State& state) {
  const auto m = expr::parse_metric(kSphere);
  for (auto _ : state) benchmark::DoNotOptimize(geom::christoffel(m));
}
BENCHMARK(BM_Christoffel);

// Semispray through curvature of the canonical d-connection.
void BM_CurvaturePipeline(benchmark::State& state) {
  const auto m = expr::parse_metric(kSphere);
  for (auto _ : state) {
    const auto vm = geom::vertical_metric(m, geom::VielbeinMode::Identity);
    const auto nc = geom::nconnection(geom::semispray(m, vm));
    const auto dc = geom::canonical_dconnection(geom::sasaki_dmetric(m, vm, nc), geom::Variant::TM);
    benchmark::DoNotOptimize(geom::dcurvature(dc, nc));
  }
}
BENCHMARK(BM_CurvaturePipeline)->Unit(benchmark::kMillisecond);

void BM_SpectralD(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const double L = 2 * std::numbers::pi;
  const hier::SpectralOps ops(n, L);
  Rng rng(1);
  const auto v = hier::random_field(n, 3, L, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ops.D(v));
  state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}
BENCHMARK(BM_SpectralD)->RangeMultiplier(4)->Range(64, 4096);

void BM_SpectralDinv(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const double L = 2 * std::numbers::pi;
  const hier::SpectralOps ops(n, L);
  Rng rng(2);
  const auto f = ops.D(hier::random_field(n, 3, L, rng));
  for (auto _ : state) benchmark::DoNotOptimize(ops.Dinv(f));
  state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}
BENCHMARK(BM_SpectralDinv)->RangeMultiplier(4)->Range(64, 4096);

// Ten RK4 steps of the k = 1 flow; items are steps.
void BM_Rk4Steps(benchmark::State& state) {
  pde::FlowConfig c;
  c.points = std::size_t(state.range(0));
  c.dt = 1e-4;
  c.tau_end = 1e-3;
  const auto v0 = pde::initial_data(c);
  for (auto _ : state) benchmark::DoNotOptimize(pde::integrate_flow(c, v0));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_Rk4Steps)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
