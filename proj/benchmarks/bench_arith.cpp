#include "normcount/arith.hpp"
#include "normcount/fields.hpp"
#include "normcount/forms.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace normcount;

namespace {

std::vector<u64> random_values(int bits, std::size_t n) {
    std::mt19937_64 rng(42);
    std::vector<u64> v(n);
    for (auto& x : v) x = (rng() >> (64 - bits)) | 1;
    return v;
}

void BM_Factor(benchmark::State& state) {
    const auto values = random_values(static_cast<int>(state.range(0)), 1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(factor(values[i++ & 1023]));
    }
}

void BM_SpfFactor(benchmark::State& state) {
    const SpfTable table(1 << 24);
    const auto values = random_values(24, 1024);
    std::size_t i = 0;
    PrimePower out[16];
    for (auto _ : state) {
        benchmark::DoNotOptimize(table.factor_into(values[i++ & 1023], out));
    }
}

void BM_SpfBuild(benchmark::State& state) {
    for (auto _ : state) {
        SpfTable t(static_cast<u64>(state.range(0)));
        benchmark::DoNotOptimize(t.spf(12345));
    }
}

void BM_RLConvolution(benchmark::State& state) {
    const AbelianField L(make_field_spec(9, {1, 8}, true));
    const auto values = random_values(30, 1024);
    std::vector<Factorization> fs;
    for (u64 v : values) fs.push_back(factor(v));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(L.r_L(fs[i++ & 1023]));
    }
}

void BM_RLSplitting(benchmark::State& state) {
    const AbelianField L(make_field_spec(9, {1, 8}, true));
    const auto values = random_values(30, 1024);
    std::vector<Factorization> fs;
    for (u64 v : values) fs.push_back(factor(v));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(L.r_L_from_splitting(fs[i++ & 1023]));
    }
}

void BM_RootsMod(benchmark::State& state) {
    const FormSpec F = make_form_spec(1, 0, -2);
    const auto primes = primes_up_to(100000);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(roots_mod(F, primes[i++ % primes.size()]));
    }
}

} // namespace

BENCHMARK(BM_Factor)->Arg(32)->Arg(48)->Arg(62);
BENCHMARK(BM_SpfFactor);
BENCHMARK(BM_SpfBuild)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RLConvolution);
BENCHMARK(BM_RLSplitting);
BENCHMARK(BM_RootsMod);
