#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <numbers>

#include "buffon/kernels.hpp"
#include "buffon/sets.hpp"
#include "buffon/trig.hpp"

using namespace buffon;

namespace {

struct Setup {
    sets::Iteration it;
    std::vector<std::array<double, 2>> directions;
};

const Setup& setup(int n)
{
    static std::map<int, Setup> cache;
    auto found = cache.find(n);
    if (found != cache.end())
        return found->second;
    Setup s{sets::iterate(sets::named_spec("fourcorner"), n), {}};
    for (int k = 0; k < 256; ++k) {
        const double th = (k + 0.5) * std::numbers::pi / 256;
        s.directions.push_back({std::cos(th), std::sin(th)});
    }
    return cache.emplace(n, std::move(s)).first->second;
}

void BM_projected_measures_serial(benchmark::State& state)
{
    const auto& s = setup(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::projected_measures(s.it.origins(), s.it.scale_double(),
                                                                     s.it.base(), s.directions));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.it.size() * s.directions.size()));
}

void BM_projected_measures_omp(benchmark::State& state)
{
    const auto& s = setup(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::omp::projected_measures(s.it.origins(), s.it.scale_double(),
                                                                  s.it.base(), s.directions));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.it.size() * s.directions.size()));
}

const trig::ProductEvaluator kProduct{std::get<sets::ProductSpec>(sets::named_spec("slv25")), 0.5, 1, 4};

void BM_midpoint_sum_serial(benchmark::State& state)
{
    const auto count = state.range(0);
    const double h = 1.0 / static_cast<double>(count);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::midpoint_sum([](double x) { return kProduct.abs2(x); }, 0.0, h, count));
    state.SetItemsProcessed(state.iterations() * count);
}

void BM_midpoint_sum_omp(benchmark::State& state)
{
    const auto count = state.range(0);
    const double h = 1.0 / static_cast<double>(count);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::omp::midpoint_sum([](double x) { return kProduct.abs2(x); }, 0.0, h, count));
    state.SetItemsProcessed(state.iterations() * count);
}

} // namespace

BENCHMARK(BM_projected_measures_serial)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_projected_measures_omp)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_midpoint_sum_serial)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_midpoint_sum_omp)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
