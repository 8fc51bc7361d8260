#include "dicke/demkov.hpp"
#include "dicke/dynamics.hpp"
#include "dicke/ode.hpp"
#include "dicke/special_functions.hpp"
#include "dicke/spectrum.hpp"

#include <benchmark/benchmark.h>

using namespace dicke;

static void BM_GapNumeric(benchmark::State& state) {
  const DickeParams p{static_cast<int>(state.range(0)), 6.0, 0.03, 0.0, 1.0};
  FockCutoffPolicy fixed;
  fixed.fixed_cutoff = default_fock_cutoff(p);
  for (auto _ : state) benchmark::DoNotOptimize(gap_numeric(p, fixed).gap);
}
BENCHMARK(BM_GapNumeric)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_BesselJ(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j({0.5, -2.0}, x));
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(10)->Arg(30);

static void BM_FinalPopulation(benchmark::State& state) {
  const DemkovParams d{0.6, 0.03, 4, 3e-3};
  for (auto _ : state) benchmark::DoNotOptimize(final_population(d));
}
BENCHMARK(BM_FinalPopulation);

static void BM_Dop853Oscillator(benchmark::State& state) {
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    dydt[0] = y[1];
    dydt[1] = -y[0];
  };
  const std::vector<double> samples = {100.0};
  for (auto _ : state) {
    Eigen::VectorXd y(2);
    y << 1.0, 0.0;
    benchmark::DoNotOptimize(integrate_dop853(rhs, 0.0, y, samples, nullptr).accepted_steps);
  }
}
BENCHMARK(BM_Dop853Oscillator);

static void BM_Propagate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DickeParams p{n, 3.0, 0.0, 1e-3, 1.0};
  RampSchedule s = RampSchedule::from_stages(9.0, 40.0, 0.8 * critical_field(p), 0.03, n, 0.0);
  s.t_f = s.t_i;
  const SpinBosonBasis basis(n, default_fock_cutoff(p) + 10);
  const std::vector<double> samples = {s.t_f};
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(p, s, noninteracting_ground(basis), samples).jz.back());
  }
}
BENCHMARK(BM_Propagate)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
