#include <benchmark/benchmark.h>

#include <numbers>

#include "nambu_em/dynamics.hpp"
#include "nambu_em/nambu_bracket.hpp"
#include "nambu_em/realspace_bridge.hpp"

using namespace nambu_em;
using std::numbers::pi;

namespace {

SpectralState band_state(int n, double radius) {
  IcParams p;
  p.kind = IcKind::random_solenoidal;
  p.grid = {{n, n, n}, {2 * pi, 2 * pi, 2 * pi}};
  p.seed = 7;
  p.cutoff_fraction = 1.0;
  p.band_radius = radius;
  return make_ic(p);
}

SpectralState grid_state(int n) {
  IcParams p;
  p.kind = IcKind::random_solenoidal;
  p.grid = {{n, n, n}, {2 * pi, 2 * pi, 2 * pi}};
  p.seed = 7;
  return make_ic(p);
}

void BM_RhsGeneric(benchmark::State& st) {
  const SpectralState s = band_state(32, static_cast<double>(st.range(0)) / 10);
  for (auto _ : st) benchmark::DoNotOptimize(maxwell_rhs(s, BracketPath::generic));
  st.counters["modes"] = static_cast<double>(s.size());
}

void BM_RhsClosedForm(benchmark::State& st) {
  const SpectralState s = band_state(32, static_cast<double>(st.range(0)) / 10);
  for (auto _ : st) benchmark::DoNotOptimize(maxwell_rhs(s, BracketPath::closed_form));
  st.counters["modes"] = static_cast<double>(s.size());
}

void BM_Step(benchmark::State& st, IntegratorKind kind) {
  const SpectralState s = band_state(32, 4.9);
  const Stepper stepper(kind, s, 0.01);
  SpectralState cur = s;
  for (auto _ : st) {
    cur = stepper.advance(cur);
    benchmark::DoNotOptimize(cur);
  }
  st.counters["modes"] = static_cast<double>(s.size());
}

void BM_ToSpectral(benchmark::State& st, TransformPath path) {
  const LatticeField f = to_lattice(grid_state(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(to_spectral(f, kDefaultConstraintTol, path));
}

void BM_ToLattice(benchmark::State& st, TransformPath path) {
  const SpectralState s = grid_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(to_lattice(s, kDefaultConstraintTol, path));
}

}  // namespace

BENCHMARK(BM_RhsGeneric)->Arg(20)->Arg(49)->Arg(100);
BENCHMARK(BM_RhsClosedForm)->Arg(20)->Arg(49)->Arg(100);
BENCHMARK_CAPTURE(BM_Step, exact, IntegratorKind::exact);
BENCHMARK_CAPTURE(BM_Step, midpoint, IntegratorKind::midpoint);
BENCHMARK_CAPTURE(BM_Step, rk4, IntegratorKind::rk4);
BENCHMARK_CAPTURE(BM_ToSpectral, separable, TransformPath::separable)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK_CAPTURE(BM_ToSpectral, direct, TransformPath::direct)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ToLattice, separable, TransformPath::separable)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK_CAPTURE(BM_ToLattice, direct, TransformPath::direct)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
