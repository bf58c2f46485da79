#include "normcount/engine.hpp"
#include "normcount/fields.hpp"
#include "normcount/sieve.hpp"

#include <benchmark/benchmark.h>

using namespace normcount;

namespace {

const FormSpec& pell() {
    static const FormSpec F = make_form_spec(1, 0, -2);
    return F;
}

const AbelianField& cubic9() {
    static const AbelianField L(make_field_spec(9, {1, 8}, true));
    return L;
}

void sweep_count(benchmark::State& state, Strategy strategy) {
    SweepConfig cfg;
    cfg.B = state.range(0);
    cfg.strategy = strategy;
    cfg.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_NFL(cubic9(), pell(), cfg, CountMode::exact_norm));
    }
    state.SetItemsProcessed(state.iterations() * (2 * cfg.B + 1) * (2 * cfg.B + 1));
}

void BM_SweepRowSieve(benchmark::State& state) { sweep_count(state, Strategy::row_sieve); }
void BM_SweepSpfTable(benchmark::State& state) { sweep_count(state, Strategy::spf_table); }
void BM_SweepNaive(benchmark::State& state) { sweep_count(state, Strategy::naive); }

void BM_CountAll(benchmark::State& state) {
    SweepConfig cfg;
    cfg.W = 630;
    cfg.base = {1, 0};
    cfg.threads = 1;
    const i64 B = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_all(cubic9(), pell(), {B / 4, B / 2, B}, cfg));
    }
}

void BM_Pipeline(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(lower_bound_pipeline(cubic9(), pell(), state.range(0)));
    }
}

void BM_BetaWeights(benchmark::State& state) {
    const double z = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(beta_weights(std::pow(z, 6), 1, SieveSign::lower, z));
    }
}

} // namespace

BENCHMARK(BM_SweepRowSieve)->Args({256, 1})->Args({1024, 1})->Args({1024, 4})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSpfTable)->Args({256, 1})->Args({1024, 1})->Args({1024, 4})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepNaive)->Args({256, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountAll)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pipeline)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BetaWeights)->Arg(20)->Arg(30)->Unit(benchmark::kMicrosecond);
