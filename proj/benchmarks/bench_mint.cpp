#include <benchmark/benchmark.h>

#include <string>

#include "qrg/mint.hpp"

namespace {

void BM_MintToken(benchmark::State& state, qrg::HashId hash) {
  const qrg::EncodingSpec spec{hash, "042", 40, 40};
  std::uint64_t serial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrg::mint_token(spec, std::to_string(serial++ % 1000)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void BM_PredictPair(benchmark::State& state, qrg::HashId hash) {
  const qrg::EncodingSpec spec{hash, "042", 40, 40};
  int index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrg::predict_pair(spec, "057", index));
    index = (index + 1) % spec.pairs_per_token;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_MintToken, md5, qrg::HashId::HmacMd5);
BENCHMARK_CAPTURE(BM_MintToken, sha256, qrg::HashId::HmacSha256);
BENCHMARK_CAPTURE(BM_MintToken, sha512, qrg::HashId::HmacSha512);
BENCHMARK_CAPTURE(BM_PredictPair, md5, qrg::HashId::HmacMd5);
BENCHMARK_CAPTURE(BM_PredictPair, sha512, qrg::HashId::HmacSha512);

BENCHMARK_MAIN();
