#include <benchmark/benchmark.h>

#include "optomech/dynamics.hpp"
#include "optomech/models.hpp"
#include "optomech/spectrum.hpp"

namespace {

using namespace optomech;

DissipationParams paper_rates() {
  DissipationParams d;
  d.kappa1 = d.kappa2 = 0.001;
  d.gamma = 0.001;
  d.gamma_phi = 0.01;
  d.n_th = 0.15;
  return d;
}

LiouvillianOp liouvillian(int n) {
  const auto layout = build_layout(n, n);
  return build_liouvillian(build_effective_hamiltonian(symmetric_effective_params(0.5, 1.0), layout), paper_rates(),
                           layout);
}

void BM_LowestEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto method = state.range(1) == 0 ? EigenMethod::Dense : EigenMethod::Iterative;
  const auto h = build_effective_hamiltonian(symmetric_effective_params(1.0, 1.0), build_layout(n, n));
  EigenOptions o;
  o.method = method;
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(h, 5, o));
}
BENCHMARK(BM_LowestEigenvalues)->Args({6, 0})->Args({6, 1})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

void BM_BuildLiouvillian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto layout = build_layout(n, n);
  const auto h = build_effective_hamiltonian(symmetric_effective_params(0.5, 1.0), layout);
  for (auto _ : state) benchmark::DoNotOptimize(build_liouvillian(h, paper_rates(), layout));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ApplyHermitian(benchmark::State& state) {
  const auto l = liouvillian(static_cast<int>(state.range(0)));
  const StateVector v = thermal_state(l.layout(), 0.15, QubitLevel::Excited).vectorized();
  StateVector out;
  for (auto _ : state) {
    l.apply_hermitian(v, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ApplyHermitian)->Arg(4)->Arg(6)->Arg(8);

void BM_FullProduct(benchmark::State& state) {
  const auto l = liouvillian(static_cast<int>(state.range(0)));
  const StateVector v = thermal_state(l.layout(), 0.15, QubitLevel::Excited).vectorized();
  for (auto _ : state) benchmark::DoNotOptimize(l.apply(v));
}
BENCHMARK(BM_FullProduct)->Arg(4)->Arg(6)->Arg(8);

void BM_Propagate(benchmark::State& state) {
  const auto l = liouvillian(static_cast<int>(state.range(0)));
  const auto rho0 = thermal_state(l.layout(), 0.15, QubitLevel::Excited);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(rho0, l, 10.0));
}
BENCHMARK(BM_Propagate)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const auto l = liouvillian(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(l));
}
BENCHMARK(BM_SteadyState)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
