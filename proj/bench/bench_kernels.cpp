#include "mkg/data.hpp"
#include "mkg/dynamics.hpp"
#include "mkg/estimates.hpp"
#include "mkg/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace
{

using mkg::Complex;

std::vector<Complex> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<Complex> v(n);
    for (auto& z : v)
        z = Complex(d(rng), d(rng));
    return v;
}

template <bool Parallel> void BM_multiply(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 1), y = random_vector(n, 2);
    std::vector<Complex> out(n);
    for (auto _ : state)
    {
        if constexpr (Parallel)
            mkg::kernels::multiply(x.data(), y.data(), out.data(), n);
        else
            mkg::kernels::reference::multiply(x.data(), y.data(), out.data(), n);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetBytesProcessed(static_cast<long>(state.iterations() * n * 3 * sizeof(Complex)));
}

template <bool Parallel> void BM_sum_abs2(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? mkg::kernels::sum_abs2(x.data(), n)
                                          : mkg::kernels::reference::sum_abs2(x.data(), n));
    state.SetBytesProcessed(static_cast<long>(state.iterations() * n * sizeof(Complex)));
}

template <bool Parallel> void BM_pad_band(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0)), m = 3 * n / 2;
    const auto src = random_vector(static_cast<std::size_t>(n) * n * n, 4);
    std::vector<Complex> dst(static_cast<std::size_t>(m) * m * m);
    for (auto _ : state)
    {
        if constexpr (Parallel)
            mkg::kernels::pad_band(src.data(), n, n / 3, dst.data(), m);
        else
            mkg::kernels::reference::pad_band(src.data(), n, n / 3, dst.data(), m);
        benchmark::DoNotOptimize(dst.data());
    }
}

void BM_rk4_step(benchmark::State& state)
{
    const mkg::Grid g(static_cast<int>(state.range(0)), 6.283185307179586);
    const mkg::GaugeState st = mkg::make_initial_state(g, {});
    mkg::dynamics::Evaluator ev(g, {});
    for (auto _ : state)
        benchmark::DoNotOptimize(mkg::dynamics::step(st, 0.005, ev));
}

void BM_symbol_sampler(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(mkg::estimates::sample_symbol_bound(state.range(0), 0));
}

} // namespace

BENCHMARK(BM_multiply<false>)->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_multiply<true>)->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_sum_abs2<false>)->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_sum_abs2<true>)->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_pad_band<false>)->Arg(32)->Arg(64);
BENCHMARK(BM_pad_band<true>)->Arg(32)->Arg(64);
BENCHMARK(BM_rk4_step)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_symbol_sampler)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
