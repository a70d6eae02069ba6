// Serial vs OpenMP timings for the parallel kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "rotloc/characteristic.hpp"
#include "rotloc/localization.hpp"
#include "rotloc/wavefunction.hpp"

using namespace rotloc;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

LabState state() {
  const SingularModel sm = singular_model(1.0, 0.01, 0.01, +1);
  return make_lab_state(sm.params, sm.e_root);
}

void BM_RotIntegrals(benchmark::State& st) {
  const double kappa = static_cast<double>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(rot_integrals(kappa, 1.0, +1, YConvention::decaying, 1e-12, exec_of(st)));
}
BENCHMARK(BM_RotIntegrals)->ArgsProduct({{0, 1}, {10, 10000, 1000000000}});

void BM_ResidualCheck(benchmark::State& st) {
  const LabState s = state();
  const auto pts = sample_points(1, static_cast<int>(st.range(1)), s.params.d);
  for (auto _ : st) benchmark::DoNotOptimize(residual_check(s, pts, exec_of(st)));
}
BENCHMARK(BM_ResidualCheck)->ArgsProduct({{0, 1}, {100, 10000}});

void BM_LabQuadrature(benchmark::State& st) {
  const LabState s = state();
  for (auto _ : st) benchmark::DoNotOptimize(lab_radius_numeric(s, 1e-12, 0.0, 0.0, exec_of(st)));
}
BENCHMARK(BM_LabQuadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(sweep(1e1, 1e9, 33, 1.0, +1, 1e-12, exec_of(st)));
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveCharacteristic(benchmark::State& st) {
  double h = 1e-4;
  for (auto _ : st) {
    benchmark::DoNotOptimize(solve_characteristic({1.0, h, 0.0}));
    h = h < 1e-2 ? h * 1.001 : 1e-4;
  }
}
BENCHMARK(BM_SolveCharacteristic);

}  // namespace

BENCHMARK_MAIN();
