#include <benchmark/benchmark.h>

#include <random>

#include "qdisc/bessel.hpp"
#include "qdisc/control.hpp"
#include "qdisc/dynamics.hpp"
#include "qdisc/moment.hpp"
#include "qdisc/spectral.hpp"

using namespace qdisc;

namespace {

const Basis& bench_basis() {
  static const Basis b = Basis::with_modes(200);
  return b;
}

void BM_BesselJ(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) + 0.37;
  for (auto _ : state) {
    for (int nu = 0; nu <= 3; ++nu) benchmark::DoNotOptimize(bessel::bessel_j(nu, x));
  }
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(15)->Arg(40)->Arg(500);

void BM_ComputeZeros(benchmark::State& state) {
  const int k_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel::compute_zeros(3, k_max));
}
BENCHMARK(BM_ComputeZeros)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CouplingMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coupling_matrix(n, bench_basis()));
}
BENCHMARK(BM_CouplingMatrix)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_Synthesize(benchmark::State& state) {
  const TargetParams params(0.25, 0.25);
  const double horizon = 1.0;
  std::mt19937_64 rng(7);
  const auto packet = wave_packet(params, horizon, bench_basis(), 40);
  const auto target = random_tangent_target(bench_basis(), packet, 10, 0.5, rng);
  const SteeringProblem problem{params, horizon, RadialState(3), target};
  const SynthesisOptions opts{static_cast<int>(state.range(0)), 1 << 14, 1e12};
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_linearized(problem, bench_basis(), opts));
}
BENCHMARK(BM_Synthesize)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SimulateBilinear(benchmark::State& state) {
  const auto sys = GalerkinSystem::from_basis(bench_basis(), static_cast<int>(state.range(0)));
  const auto u = ControlSignal::from_function(
      1.0, 1 << 12, [](double t) { return 0.05 * std::sin(6.283185307179586 * t); },
      [](double t) { return 0.05 * 6.283185307179586 * std::cos(6.283185307179586 * t); });
  const auto w = bilinear_coefficient(u);
  RadialState psi0(3);
  psi0(1) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_bilinear(psi0, w, sys, 1 << 12));
}
BENCHMARK(BM_SimulateBilinear)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
