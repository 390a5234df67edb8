#include <benchmark/benchmark.h>

#include "qstack/descent.hpp"
#include "qstack/parallel.hpp"

using namespace qstack;

namespace {

void BM_VerifyStack(benchmark::State& state, bool parallel) {
  const QuotientStack st = make_quotient_stack(regular_action(klein_four_group()));
  const auto corpus = random_corpus(st, static_cast<std::size_t>(state.range(0)), 3, 7);
  VerifyOptions o;
  o.parallel = parallel;
  for (auto _ : state) {
    const StackReport r = verify_stack(st, corpus, {}, o);
    benchmark::DoNotOptimize(r.cases);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = parallel ? worker_threads() : 1;
}

void BM_Serial(benchmark::State& s) { BM_VerifyStack(s, false); }
void BM_Parallel(benchmark::State& s) { BM_VerifyStack(s, true); }

}  // namespace

BENCHMARK(BM_Serial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
