// Microbenchmarks: synthesis throughput, lowering, packed simulation.

#include <benchmark/benchmark.h>

#include "satoc/bench.hpp"
#include "satoc/lowering.hpp"
#include "satoc/sim.hpp"
#include "satoc/synth.hpp"

using namespace satoc;

namespace {

class NullSink : public GateSink {
 public:
  void on_gate(const Gate&) override {}
};

void BM_synth_size(benchmark::State& state) {
  uint32_t n = static_cast<uint32_t>(state.range(0));
  auto f = random_kcnf(n, phase_transition_m(n, 4), 4, 1);
  for (auto _ : state) {
    NullSink sink;
    synth_size_emit(f, n, {}, sink);
  }
}
BENCHMARK(BM_synth_size)->Arg(40)->Arg(80);

void BM_synth_depth(benchmark::State& state) {
  uint32_t n = static_cast<uint32_t>(state.range(0));
  auto f = random_kcnf(n, phase_transition_m(n, 4), 4, 1);
  for (auto _ : state) {
    NullSink sink;
    synth_depth_emit(f, 2 * n, {}, sink);
  }
}
BENCHMARK(BM_synth_depth)->Arg(40)->Arg(80);

void BM_lower_and_cost(benchmark::State& state) {
  uint32_t n = static_cast<uint32_t>(state.range(0));
  auto f = random_kcnf(n, phase_transition_m(n, 4), 4, 1);
  Layout layout = oracle_layout(f, n);
  for (auto _ : state) {
    CostAccumulator acc(layout, Level::ElementaryLevel);
    ToffoliLowerer tof(acc, {ToffoliMode::Approximate});
    MctLowerer mct(tof, layout, {ToffoliMode::Approximate});
    synth_size_emit(f, n, {}, mct);
    benchmark::DoNotOptimize(acc.report().size);
  }
}
BENCHMARK(BM_lower_and_cost)->Arg(40)->Arg(80);

void BM_packed_verify(benchmark::State& state) {
  uint32_t n = static_cast<uint32_t>(state.range(0));
  auto f = random_kcnf(n, phase_transition_m(n, 3), 3, 1);
  SimProgram prog(oracle_layout(f, 16));
  synth_size_emit(f, 16, {}, prog);
  VerifyOptions vo;
  vo.mode = VerifyMode::Sampled;
  vo.sample_count = 4096;
  for (auto _ : state) {
    auto rep = verify_oracle(prog, f, vo);
    benchmark::DoNotOptimize(rep.states_checked);
  }
}
BENCHMARK(BM_packed_verify)->Arg(24)->Arg(48);

}  // namespace

BENCHMARK_MAIN();
