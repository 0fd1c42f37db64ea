// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "genhankel/limits.hpp"
#include "genhankel/spectra.hpp"
#include "genhankel/words.hpp"

using namespace genhankel;

namespace {

EnsembleConfig ensemble_config(std::int64_t n) {
  EnsembleConfig cfg;
  cfg.link = LinkSpec::theta_link(1.5);
  cfg.n = n;
  cfg.reps = 4;
  cfg.seed = 1;
  return cfg;
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto cfg = ensemble_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_spectra(cfg));
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto cfg = ensemble_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_spectra_serial(cfg));
}

void BM_WordLimitMc(benchmark::State& state) {
  const Word w = parse_word("abcabc");
  for (auto _ : state) benchmark::DoNotOptimize(word_limit_mc(w, 2.5, state.range(0), 3));
}

void BM_WordLimitMcReference(benchmark::State& state) {
  const Word w = parse_word("abcabc");
  for (auto _ : state) benchmark::DoNotOptimize(word_limit_mc_reference(w, 2.5, state.range(0), 3));
}

void BM_ExactCount(benchmark::State& state) {
  const Word w = parse_word("abcacb");
  const auto link = LinkSpec::theta_link(2.5);
  for (auto _ : state) benchmark::DoNotOptimize(count_pi_star_exact(w, state.range(0), link));
}

void BM_ExactCountReference(benchmark::State& state) {
  const Word w = parse_word("abcacb");
  const auto link = LinkSpec::theta_link(2.5);
  for (auto _ : state) benchmark::DoNotOptimize(count_pi_star_reference(w, state.range(0), link));
}

}  // namespace

BENCHMARK(BM_EnsembleParallel)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleSerial)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WordLimitMc)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WordLimitMcReference)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactCount)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactCountReference)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
