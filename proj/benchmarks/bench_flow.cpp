#include <benchmark/benchmark.h>

#include "msflow/estimator.hpp"
#include "msflow/keyvalue.hpp"
#include "msflow/parallel.hpp"
#include "msflow/serial.hpp"
#include "msflow/synth.hpp"

namespace {

using namespace msflow;

FrameSequence stimulus(int size, double speed) {
    SynthSpec spec = default_stimulus(speed);
    spec.width = size;
    spec.height = size;
    spec.seed = 1;
    return generate_sequence(spec);
}

ConfidenceModel model(int levels) {
    ConfidenceModel m = load_model(MSFLOW_DEFAULT_MODEL);
    m.levels = levels;
    return m;
}

void BM_Pyramid(benchmark::State& state) {
    const auto seq = stimulus(static_cast<int>(state.range(0)), 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(build_pyramid(seq[0], 4, 2.0, 7));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Pyramid)->Arg(128)->Arg(256)->Arg(512);

void BM_LucasKanade(benchmark::State& state) {
    const auto seq = stimulus(static_cast<int>(state.range(0)), 2.0);
    const LKParams lk;
    for (auto _ : state) benchmark::DoNotOptimize(lk_flow(seq[0], seq[1], lk));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_LucasKanade)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Serial(benchmark::State& state) {
    const auto seq = stimulus(static_cast<int>(state.range(0)), 6.0);
    SerialParams p;
    p.levels = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(serial_flow(seq[0], seq[1], p));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Serial)->Args({128, 3})->Args({256, 3})->Args({256, 4})->Unit(benchmark::kMillisecond);

// range(2) = worker threads for the level loop.
void BM_Parallel(benchmark::State& state) {
    const auto seq = stimulus(static_cast<int>(state.range(0)), 6.0);
    ParallelParams p;
    p.model = model(static_cast<int>(state.range(1)));
    FlowOptions opt;
    opt.jobs = static_cast<int>(state.range(2));
    for (auto _ : state) benchmark::DoNotOptimize(parallel_flow(seq[0], seq[1], p, opt));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Parallel)
    ->Args({128, 3, 1})
    ->Args({256, 3, 1})
    ->Args({256, 3, 3})
    ->Args({256, 4, 1})
    ->Args({256, 4, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

// Object-only estimation as used by the discrimination harness.
void BM_ObjectSpeed(benchmark::State& state) {
    EstimatorConfig cfg;
    cfg.method = static_cast<Method>(state.range(0));
    cfg.model = model(3);
    const SpeedEstimator est = make_speed_estimator(cfg);
    const SynthSpec spec = default_stimulus(5.0);
    const auto seq = generate_sequence(spec);
    for (auto _ : state) benchmark::DoNotOptimize(est(spec, seq));
    state.SetLabel(std::string(to_string(cfg.method)));
}
BENCHMARK(BM_ObjectSpeed)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
