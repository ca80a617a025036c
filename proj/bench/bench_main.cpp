// Serial reference path against the OpenMP path for the heavy kernels.
#include <benchmark/benchmark.h>

#include "ruelle/gamma.hpp"
#include "ruelle/map_model.hpp"
#include "ruelle/ruelle.hpp"

using namespace ruelle;

namespace {

Exec policy(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

const EntireMap& map() {
    static const EntireMap f = normalize(EntireMap::sine_family(0.3, 0.7));
    return f;
}

void BM_l1_norm(benchmark::State& st) {
    GammaCombination g = GammaCombination::single(cplx(0.4, 0.9));
    g.add(cplx(-0.7, 0.3), cplx(0.2, -0.5));
    const auto cfg = auto_config(g);
    for (auto _ : st) benchmark::DoNotOptimize(l1_norm(g, cfg, policy(st)));
}

void BM_apply_direct(benchmark::State& st) {
    auto phi = [](cplx y) { return gamma_eval(cplx(0.4, 0.9), y); };
    const BranchWindow win{200, true};
    for (auto _ : st) benchmark::DoNotOptimize(apply_direct(map(), phi, cplx(0.2, 0.5), win, {2, 0}, policy(st)));
}

void BM_critical_points(benchmark::State& st) {
    CriticalSearchOptions opts;
    opts.exec = policy(st);
    for (auto _ : st) benchmark::DoNotOptimize(critical_points(map(), 40.0, opts));
}

}  // namespace

// argument 0 = serial, 1 = parallel
BENCHMARK(BM_l1_norm)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_direct)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_critical_points)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
