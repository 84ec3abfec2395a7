#include <benchmark/benchmark.h>

#include "camw/simulator.hpp"

using namespace camw;

namespace {

SimConfig bench_config(QueueModel model, SchedulerKind scheduler) {
    SimConfig c;
    c.model = model;
    c.scheduler = scheduler;
    c.rho = 0.5;
    c.lambda1 = 0.2;
    c.lambda2 = 0.2;
    c.green_slots = 2;
    c.horizon = 4096;
    c.seed = 1234;
    return c;
}

void run_config(benchmark::State& state, const SimConfig& config) {
    for (auto _ : state) {
        Metrics m = run(config);
        benchmark::DoNotOptimize(m.total_departures());
    }
    state.SetItemsProcessed(state.iterations() * config.horizon);
}

void BM_SingleLaneCamw(benchmark::State& state) {
    run_config(state, bench_config(QueueModel::QueueI, SchedulerKind::Camw));
}

void BM_SingleLaneMaxWeight(benchmark::State& state) {
    run_config(state, bench_config(QueueModel::QueueI, SchedulerKind::MaxWeight));
}

void BM_TwoSlotCamw(benchmark::State& state) {
    run_config(state, bench_config(QueueModel::QueueII, SchedulerKind::Camw));
}

void BM_TwoSlotMaxWeight(benchmark::State& state) {
    run_config(state, bench_config(QueueModel::QueueII, SchedulerKind::MaxWeight));
}

void BM_FixedTime(benchmark::State& state) {
    run_config(state, bench_config(QueueModel::QueueI, SchedulerKind::FixedTime));
}

void BM_TracedRun(benchmark::State& state) {
    const SimConfig config = bench_config(QueueModel::QueueII, SchedulerKind::Camw);
    long long sink = 0;
    for (auto _ : state) {
        run(config, [&sink](const TraceRow& row) { sink += row.phase_id; });
        benchmark::DoNotOptimize(sink);
    }
    state.SetItemsProcessed(state.iterations() * config.horizon);
}

}  // namespace

BENCHMARK(BM_SingleLaneCamw);
BENCHMARK(BM_SingleLaneMaxWeight);
BENCHMARK(BM_TwoSlotCamw);
BENCHMARK(BM_TwoSlotMaxWeight);
BENCHMARK(BM_FixedTime);
BENCHMARK(BM_TracedRun);
