#include <benchmark/benchmark.h>

#include "camw/estimator.hpp"

using namespace camw;

namespace {

AlignmentView lane_view(int horizon, bool with_comm) {
    AlignmentView view;
    view.horizon = horizon;
    view.p_aligned = 0.6;
    if (with_comm && horizon >= 2) view.comm = {{2, true}};
    return view;
}

void BM_SingleLaneClosedForm(benchmark::State& state) {
    const auto view = lane_view(static_cast<int>(state.range(0)), state.range(1) != 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(expected_pass_queue1(view));
}

void BM_SingleLaneEnumeration(benchmark::State& state) {
    const auto view = lane_view(static_cast<int>(state.range(0)), false);
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_expected_pass(view));
}

void BM_TwoSlotClosedForm(benchmark::State& state) {
    const SlotView slots{true, true};
    const auto shared = lane_view(static_cast<int>(state.range(0)), true);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            expected_pass_queue2(slots, Movement::Straight, shared, 4));
}

void BM_PassCountDistribution(benchmark::State& state) {
    const auto view = lane_view(static_cast<int>(state.range(0)), true);
    for (auto _ : state)
        benchmark::DoNotOptimize(pass_count_distribution(view).mean());
}

}  // namespace

BENCHMARK(BM_SingleLaneClosedForm)->Args({2, 0})->Args({8, 0})->Args({8, 1});
BENCHMARK(BM_SingleLaneEnumeration)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_TwoSlotClosedForm)->Arg(2)->Arg(6);
BENCHMARK(BM_PassCountDistribution)->Arg(4)->Arg(8);
