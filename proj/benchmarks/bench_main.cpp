// Microbenchmarks for the hot paths: gate application, measurement collapse,
// full protocol runs (pure and noisy) and the stabilizer average.
#include <benchmark/benchmark.h>

#include <numbers>

#include "onewayqc/noise_tomo.hpp"

namespace {

using namespace onewayqc;
constexpr double kPi = std::numbers::pi;

void BM_Apply1Q(benchmark::State& state) {
  const StateVector c4 = build_c4();
  const Gate1Q h = gates::hadamard();
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_1q(c4, h, 2));
  }
}
BENCHMARK(BM_Apply1Q);

void BM_ApplyCP(benchmark::State& state) {
  const StateVector hyper = build_hyperentangled();
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_cp(hyper, 1, 3));
  }
}
BENCHMARK(BM_ApplyCP);

void BM_MeasureEquatorial(benchmark::State& state) {
  const StateVector c4 = build_c4();
  const EquatorialBasis basis{kPi / 4};
  const OutcomeMode mode = OutcomeMode::postselect(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure_equatorial(c4, 2, basis, mode));
  }
}
BENCHMARK(BM_MeasureEquatorial);

void BM_RunRotationPure(benchmark::State& state) {
  const StateVector c4 = build_c4();
  const RotationJob job =
      RotationJob::branch(OrderingName::a, kPi / 4, kPi / 2, 0, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_rotation(job, c4));
  }
}
BENCHMARK(BM_RunRotationPure);

void BM_RunRotationNoisy(benchmark::State& state) {
  const DensityMatrix noisy = WhiteNoiseModel{0.872}.cluster_state();
  const RotationJob job =
      RotationJob::branch(OrderingName::a, kPi / 4, kPi / 2, 0, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_rotation(job, noisy));
  }
}
BENCHMARK(BM_RunRotationNoisy);

void BM_RunRotationSampled(benchmark::State& state) {
  const StateVector c4 = build_c4();
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_rotation(
        RotationJob::sampled(OrderingName::b, kPi / 4, kPi / 2,
                             derive_seed(7, i++)),
        c4));
  }
}
BENCHMARK(BM_RunRotationSampled);

void BM_RunCnot(benchmark::State& state) {
  const StateVector c4 = build_c4();
  const CnotJob job = CnotJob::branch(CnotChoice::Hadamard, kPi / 2, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_cnot(job, c4));
  }
}
BENCHMARK(BM_RunCnot);

void BM_StabilizerFidelity(benchmark::State& state) {
  const DensityMatrix noisy = WhiteNoiseModel{0.872}.cluster_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(stabilizer_fidelity(noisy));
  }
}
BENCHMARK(BM_StabilizerFidelity);

}  // namespace

BENCHMARK_MAIN();
