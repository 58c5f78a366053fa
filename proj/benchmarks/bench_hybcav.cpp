#include <benchmark/benchmark.h>

#include "hybcav/cavity_stack.hpp"
#include "hybcav/fom.hpp"
#include "hybcav/gaussian.hpp"
#include "hybcav/hybrid.hpp"
#include "hybcav/tmm.hpp"

using namespace hybcav;

namespace {

constexpr double kLambda = 637e-9;

tmm::CavityLayout diamond_like() {
  tmm::CavityLayout l;
  l.diamond_thickness =
      hybrid::nearest_thickness(4e-6, hybrid::ModeClass::DiamondLike, kLambda, kDiamondIndex);
  l.air_gap = hybrid::make_resonant(l.diamond_thickness, kLambda, kDiamondIndex, 2e-6).air_gap;
  l.sigma_da = 0.25e-9;
  return l;
}

fom::CavityDesign design() {
  const auto l = diamond_like();
  fom::CavityDesign d;
  d.cavity = hybrid::make_resonant(l.diamond_thickness, kLambda, kDiamondIndex, 2e-6);
  d.air_mirror = 84e-6;
  d.diamond_parasitic = 34e-6;
  d.outcoupling = 1000e-6;
  d.sigma_da = 0.25e-9;
  d.g0 = gaussian::solve_modes_analytic(l.diamond_thickness, l.air_gap, 20e-6, kLambda,
                                        kDiamondIndex).g0;
  d.energy_length = tmm::energy_length(l);
  return d;
}

}  // namespace

static void BM_CavityReflectivity(benchmark::State& state) {
  const auto cav = tmm::build_cavity_stack(diamond_like());
  const double f = frequency_of(kLambda);
  for (auto _ : state) benchmark::DoNotOptimize(tmm::reflectivity(cav.stack, f));
}
BENCHMARK(BM_CavityReflectivity);

static void BM_AnalyzeCavity(benchmark::State& state) {
  const auto l = diamond_like();
  for (auto _ : state) benchmark::DoNotOptimize(tmm::analyze_cavity(l));
}
BENCHMARK(BM_AnalyzeCavity)->Unit(benchmark::kMillisecond);

static void BM_ModesAnalytic(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gaussian::solve_modes_analytic(4e-6, 2e-6, 25e-6, kLambda, kDiamondIndex));
  }
}
BENCHMARK(BM_ModesAnalytic);

static void BM_ModesNumeric(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gaussian::solve_modes_numeric(4e-6, 2e-6, 25e-6, kLambda, kDiamondIndex));
  }
}
BENCHMARK(BM_ModesNumeric)->Unit(benchmark::kMicrosecond);

static void BM_AveragedBranching(benchmark::State& state) {
  fom::VibrationSpec v;
  v.quadrature_points = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fom::averaged_branching(45.0, 5e9, 1.3e19, 0.03, v));
  }
}
BENCHMARK(BM_AveragedBranching)->Arg(21)->Arg(41)->Arg(81);

static void BM_OptimizeOutcoupler(benchmark::State& state) {
  const auto d = design();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fom::optimize_outcoupler(d, {}, {}, 10e-6, 20000e-6));
  }
}
BENCHMARK(BM_OptimizeOutcoupler)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
