#include <benchmark/benchmark.h>

#include "whembed/halfplane.hpp"
#include "whembed/strip.hpp"
#include "whembed/wedge.hpp"

using namespace whembed;

static void BM_StripOperator(benchmark::State& state) {
  const double ka = static_cast<double>(state.range(0));
  const int modes = strip::default_modes(ka);
  for (auto _ : state) benchmark::DoNotOptimize(strip::BieOperator(strip::StripConfig::from_ka(ka), modes));
}
BENCHMARK(BM_StripOperator)->Arg(1)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_StripSolve(benchmark::State& state) {
  const strip::BieOperator op(strip::StripConfig::from_ka(10.0), 40);
  for (auto _ : state) benchmark::DoNotOptimize(op.solve(1.1));
}
BENCHMARK(BM_StripSolve)->Unit(benchmark::kMicrosecond);

static void BM_CauchySplit(benchmark::State& state) {
  const MediumConfig m = MediumConfig::numeric_solve(1.0);
  const ContourSpec c = ContourSpec::for_medium(m, 40.0, static_cast<int>(state.range(0)));
  const SpectralFunction G{[](cplx t) { return 1.0 / (t * t + 1.0); }, HalfPlane::entire, -2.0};
  for (auto _ : state) benchmark::DoNotOptimize(cauchy_split(G, cplx(0.3, 0.5), Side::plus, c));
}
BENCHMARK(BM_CauchySplit)->Arg(1000)->Arg(2000)->Arg(4000);

static void BM_NumericHalfPlane(benchmark::State& state) {
  const MediumConfig m = MediumConfig::numeric_solve(1.0);
  const ContourSpec c = ContourSpec::for_medium(m, 40.0, 2000);
  for (auto _ : state) {
    const ScalarWHSolution s = solve_scalar_wh_numeric(halfplane::wh_problem(m, 0.75 * kPi), c, halfplane::normalizer(m));
    benchmark::DoNotOptimize(s.U_plus(cplx(0.2, 0.4)));
  }
}
BENCHMARK(BM_NumericHalfPlane)->Unit(benchmark::kMillisecond);

static void BM_WedgeClosedForm(benchmark::State& state) {
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wedge::closed_form_directivity(t, 2.0));
    t = t < 1.0 ? t + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_WedgeClosedForm);

BENCHMARK_MAIN();
