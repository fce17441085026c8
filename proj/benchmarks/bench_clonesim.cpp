#include <benchmark/benchmark.h>

#include "qrg/clonesim.hpp"
#include "qrg/rng.hpp"

namespace {

void BM_CloneQubit(benchmark::State& state) {
  const qrg::CloneParams cp{0.803, static_cast<double>(state.range(0)) / 100.0};
  qrg::RngStream rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qrg::clone_and_measure_qubit(qrg::QubitState::Plus, qrg::Basis::Z, cp, rng));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void BM_ClassifyPair(benchmark::State& state) {
  const qrg::CloneParams cp{0.803, 1.0};
  qrg::RngStream rng(7);
  const auto q1 = qrg::clone_and_measure_qubit(qrg::QubitState::Zero, qrg::Basis::Z, cp, rng);
  const auto q2 = qrg::clone_and_measure_qubit(qrg::QubitState::Plus, qrg::Basis::Z, cp, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrg::classify_pair(q1, q2, qrg::Basis::Z));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

}  // namespace

BENCHMARK(BM_CloneQubit)->Arg(33)->Arg(100);
BENCHMARK(BM_ClassifyPair);

BENCHMARK_MAIN();
