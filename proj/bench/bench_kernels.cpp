// Serial reference against the OpenMP path for the sharded kernels.
#include <benchmark/benchmark.h>

#include "nasolv/heat.hpp"
#include "nasolv/metric.hpp"
#include "nasolv/multiplier.hpp"

using namespace nasolv;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_HeatIntegrals(benchmark::State& s) {
    const HeatEvaluator h(GroupModel::abelian(2), 1.0);
    for (auto _ : s) benchmark::DoNotOptimize(heat_integrals(h, exec_of(s)).gradL1);
    label(s);
}

void BM_MonteCarloVolume(benchmark::State& s) {
    const GroupModel m = GroupModel::abelian(2);
    for (auto _ : s) benchmark::DoNotOptimize(mc_ball_volume_g(m, 1.0, 200000, 7, exec_of(s)).value);
    label(s);
}

void BM_SphericalKernel(benchmark::State& s) {
    std::vector<double> rg(256);
    for (int i = 0; i < 256; ++i) rg[i] = 8.0 * i / 255.0;
    const MultiplierProfile F = MultiplierProfile::heat(1.0);
    for (auto _ : s) benchmark::DoNotOptimize(spherical_kernel_h3(F, rg, {}, exec_of(s)).phi.back());
    label(s);
}

void BM_MHNorm(benchmark::State& s) {
    const MultiplierProfile F = MultiplierProfile::imag_power(1.0);
    for (auto _ : s) benchmark::DoNotOptimize(mh_norm(F, 2.0, MHRegime::High, {}, exec_of(s)).norm);
    label(s);
}

void BM_L1L2Bank(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(l1_l2_check({1.0}, 1, exec_of(s)).spread);
    label(s);
}

}  // namespace

BENCHMARK(BM_HeatIntegrals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloVolume)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SphericalKernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MHNorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_L1L2Bank)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
