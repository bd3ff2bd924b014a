// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "qcover/coevent.hpp"
#include "qcover/cover.hpp"
#include "qcover/measure.hpp"
#include "qcover/pks.hpp"

using namespace qcover;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

const DecoherenceFunctional& functional(int n) {
    static const auto d12 = sample_spd({.n = 12, .rank = 3, .seed = 1});
    static const auto d18 = sample_spd({.n = 18, .rank = 3, .seed = 1});
    return n == 12 ? d12 : d18;
}

void BM_measure_table(benchmark::State& state) {
    const auto& d = functional(18);
    for (auto _ : state) benchmark::DoNotOptimize(measure_table(d, exec_of(state)));
}

void BM_verify_identity(benchmark::State& state) {
    const auto& d = functional(18);
    for (auto _ : state) benchmark::DoNotOptimize(verify_identity(d, exec_of(state)));
}

void BM_pair_inequalities(benchmark::State& state) {
    const auto& d = functional(12);
    for (auto _ : state) benchmark::DoNotOptimize(pair_inequalities(d, 1e-9, exec_of(state)));
}

void BM_zero_flags(benchmark::State& state) {
    const auto& d = functional(12);
    const CoeventOptions options{.exec = exec_of(state)};
    for (auto _ : state) benchmark::DoNotOptimize(zero_flags(d, options));
}

void BM_level_indicator_sum(benchmark::State& state) {
    const HistorySpace s(24);
    for (auto _ : state) benchmark::DoNotOptimize(level_indicator_sum(s, 12, exec_of(state)));
}

void BM_scan_n5(benchmark::State& state) {
    const HistorySpace s(5);
    for (auto _ : state) benchmark::DoNotOptimize(scan(s, {.exec = exec_of(state)}));
}

void BM_uncovered_samples(benchmark::State& state) {
    const auto s = pks::orthogonal_structure();
    for (auto _ : state) benchmark::DoNotOptimize(pks::count_uncovered_samples(s, 100000, 42, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_measure_table)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_identity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pair_inequalities)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_zero_flags)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_level_indicator_sum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_n5)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_uncovered_samples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
