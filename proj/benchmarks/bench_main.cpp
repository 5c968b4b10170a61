#include <benchmark/benchmark.h>

#include "radiso/phiexp.hpp"
#include "radiso/poincare.hpp"
#include "radiso/profile.hpp"
#include "radiso/radial.hpp"
#include "radiso/transport.hpp"

using namespace radiso;

namespace {

void BM_TransportBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RadialMeasure m(RadialDensity::exp_power(3.0), n);
    benchmark::DoNotOptimize(TransportMap::build(m).lipschitz_constant());
  }
}
BENCHMARK(BM_TransportBuild)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_TailMass(benchmark::State& state) {
  RadialMeasure m(RadialDensity::exp_power(1.5), 3);
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.tail(r));
    r = r > 8.0 ? 0.1 : r + 0.37;
  }
}
BENCHMARK(BM_TailMass);

void BM_SigmaPoint(benchmark::State& state) {
  RadialMeasure m(RadialDensity::gaussian(), 2);
  const auto map = TransportMap::build(m);
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map.sigma(r));
    r = r > 6.0 ? 0.1 : r + 0.23;
  }
}
BENCHMARK(BM_SigmaPoint);

void BM_SamplePushforward(benchmark::State& state) {
  RadialMeasure m(RadialDensity::gaussian(), 2);
  const auto map = TransportMap::build(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_pushforward(map, 10000, state.range(0), 1).count);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePushforward)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ConvergenceDiagnostic(benchmark::State& state) {
  RadialMeasure m(RadialDensity::gaussian(), 1);
  const auto map = TransportMap::build(m);
  const std::vector<long> Ns{100, 1000, 10000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(convergence_diagnostic(map, Ns, map.grid_radii()).size());
  }
}
BENCHMARK(BM_ConvergenceDiagnostic)->Unit(benchmark::kMillisecond);

void BM_BoundAudit(benchmark::State& state) {
  RadialMeasure m(RadialDensity::exp_power(3.0), 1);
  const auto map = TransportMap::build(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bound_audit(m, map, state.range(0), 1, true).violations);
  }
}
BENCHMARK(BM_BoundAudit)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto phi = PhiFunction::power(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(classify(phi, 2.0, 2).integrable);
}
BENCHMARK(BM_Classify);

}  // namespace

BENCHMARK_MAIN();
