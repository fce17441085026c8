#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "qrg/cracker.hpp"
#include "qrg/experiment.hpp"
#include "qrg/rng.hpp"

namespace {

// synthetic six-eliminated constraints from the true spec at F = 1
std::vector<qrg::Constraint> true_constraints(const qrg::EncodingSpec& spec, int n_serials) {
  std::vector<qrg::Constraint> out;
  qrg::RngStream rng(3);
  for (const std::string& serial : qrg::make_serials(n_serials)) {
    for (int j = 0; j < spec.pairs_per_token; ++j) {
      if (rng.bit()) continue;  // elimination events fire on half the pairs
      const qrg::PairState p = qrg::predict_pair(spec, serial, j);
      const int position = 1 + rng.bit();
      out.push_back({serial, j, position, position == 1 ? p.first : p.second});
    }
  }
  return out;
}

void BM_ScoreCandidates(benchmark::State& state) {
  const qrg::EncodingSpec spec{qrg::HashId::HmacSha512, "042", 40, 40};
  const auto constraints = true_constraints(spec, 10);
  std::vector<qrg::Candidate> candidates;
  for (const std::string& salt : qrg::make_salt_space(3))
    candidates.push_back({spec.hash, salt});
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrg::score_candidates(candidates, constraints, 1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(candidates.size()));
}

void BM_Recover(benchmark::State& state) {
  const qrg::EncodingSpec spec{qrg::HashId::HmacSha512, "042", 40, 40};
  const auto batches = qrg::batch_by_serial(true_constraints(spec, 40), spec.pairs_per_token);
  const auto space = qrg::make_salt_space(3);
  const qrg::HashId hashes[] = {spec.hash};
  qrg::RecoverySettings settings;
  settings.z_multiple = 5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrg::recover(batches, hashes, space, settings));
  }
}

}  // namespace

BENCHMARK(BM_ScoreCandidates)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Recover)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
