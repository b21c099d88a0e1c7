#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "tfold/absystem.hpp"
#include "tfold/fieldsolver.hpp"

using namespace tfold;

namespace {

struct Case {
    CanonicalAB ab;
    PlaneWaveState w;
};

std::vector<Case> cases() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> A(0.1, 3.0), K(-1.0, 1.0), R(0.5, 3.0);
    std::vector<Case> out;
    while (out.size() < 256) {
        const CanonicalAB ab(A(rng), A(rng), A(rng), R(rng));
        if (auto w = plane_wave(ab, K(rng))) out.push_back({ab, *w});
    }
    return out;
}

void BM_growth_closed(benchmark::State& st) {
    const auto cs = cases();
    std::size_t i = 0;
    for (auto _ : st) {
        const auto& c = cs[i++ % cs.size()];
        benchmark::DoNotOptimize(growth_rate(c.ab, c.w, 0.37));
    }
}
BENCHMARK(BM_growth_closed);

void BM_growth_eigen(benchmark::State& st) {
    const auto cs = cases();
    std::size_t i = 0;
    for (auto _ : st) {
        const auto& c = cs[i++ % cs.size()];
        benchmark::DoNotOptimize(growth_rate_reference(c.ab, c.w, 0.37));
    }
}
BENCHMARK(BM_growth_eigen);

void BM_busse(benchmark::State& st) {
    BusseOptions opt;
    opt.parallel = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(busse_map(0.5, 0.5, 8.0, -1.2, 1.2, 40, -0.5, 3.0, 40, opt));
}
BENCHMARK(BM_busse)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ab_step(benchmark::State& st) {
    const Grid1D g{200 * M_PI, static_cast<int>(st.range(0)), Boundary::periodic};
    ABSolver s(ABRaw::canonical(CanonicalAB(0.5, 0.5, 8.0, 2.0)), g, 0.05);
    ABState x;
    for (double v : g.nodes()) {
        x.A.emplace_back(0.5 + 0.01 * std::cos(v), 0.0);
        x.B.push_back(0.3);
    }
    s.set_state(x);
    for (auto _ : st) s.step();
}
BENCHMARK(BM_ab_step)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
