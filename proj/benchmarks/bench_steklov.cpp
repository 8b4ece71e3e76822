#include <benchmark/benchmark.h>

#include "steklov/dtn.hpp"
#include "steklov/frequency.hpp"
#include "steklov/lab.hpp"
#include "steklov/nodal.hpp"
#include "steklov/tube.hpp"
#include "steklov/v_transform.hpp"

namespace {

using namespace steklov;

const SpectrumSlice& disk256() {
  static const SpectrumSlice s = solve_spectrum(build_dtn(share(BoundaryCurve::disk()), 256), 64);
  return s;
}

void BM_SolveSpectrum(benchmark::State& state) {
  const CurvePtr curve = share(BoundaryCurve::ellipse(2.0, 1.0));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(build_dtn(curve, n), n / 4));
}
BENCHMARK(BM_SolveSpectrum)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_BoundaryZeros(benchmark::State& state) {
  const SteklovEigenpair& pair = disk256().pairs[2 * state.range(0) - 1];
  for (auto _ : state) benchmark::DoNotOptimize(boundary_zeros(pair));
}
BENCHMARK(BM_BoundaryZeros)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMicrosecond);

void BM_BoundaryMass(benchmark::State& state) {
  const SteklovEigenpair& pair = disk256().pairs[19];
  for (auto _ : state) benchmark::DoNotOptimize(boundary_mass(pair, 0.3, 0.05));
}
BENCHMARK(BM_BoundaryMass)->Unit(benchmark::kMicrosecond);

void BM_DoublingProfile(benchmark::State& state) {
  const SteklovEigenpair& pair = disk256().pairs[19];
  for (auto _ : state) benchmark::DoNotOptimize(doubling_profile(pair, 0.3, 0.003, 0.05, DoublingMode::kBoundary));
}
BENCHMARK(BM_DoublingProfile)->Unit(benchmark::kMillisecond);

void BM_FrequencyProfile(benchmark::State& state) {
  const ScalarField u = homogeneous_harmonic(static_cast<int>(state.range(0)));
  const std::vector<double> radii = geometric_radii_count(0.05, 1.0, 32);
  for (auto _ : state) benchmark::DoNotOptimize(frequency_profile(u, nullptr, Vec2::Zero(), radii));
}
BENCHMARK(BM_FrequencyProfile)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_VTransform(benchmark::State& state) {
  const SteklovEigenpair& pair = disk256().pairs[9];
  const TubeNeighborhood tube(disk256().geometry->curve, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(v_transform(pair, tube));
}
BENCHMARK(BM_VTransform)->Unit(benchmark::kMillisecond);

void BM_ComplexZeroOracle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_complex_zero_oracle(200, 12, 42));
}
BENCHMARK(BM_ComplexZeroOracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
