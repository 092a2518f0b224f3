#include <benchmark/benchmark.h>
#include <omp.h>

#include "siegel/bessel_measure.hpp"
#include "siegel/density.hpp"
#include "siegel/form_factory.hpp"
#include "siegel/hecke.hpp"
#include "siegel/poincare.hpp"

using namespace siegel;

namespace {

const FourierExpansion& chi10() {
    static const auto f = sk_lift(plus_space_form("phi10", 4 * 256), 256);
    return f;
}

const LocalBesselData& loc() {
    static const auto cg = class_group(4);
    static const auto l = local_bessel_data(cg, 0, 3);
    return l;
}

void BM_hecke_apply(benchmark::State& st) {
    chi10();
    auto op = coset_reps(HeckeKind::T1p2, 2);
    for (auto _ : st) benchmark::DoNotOptimize(apply(op, chi10()));
}

void BM_hecke_apply_serial(benchmark::State& st) {
    chi10();
    auto op = coset_reps(HeckeKind::T1p2, 2);
    for (auto _ : st) benchmark::DoNotOptimize(apply_serial(op, chi10()));
}

void BM_sample(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(sample(loc(), std::size_t(st.range(0)), 7));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_sample_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(sample_serial(loc(), std::size_t(st.range(0)), 7));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

MeasureSampler sampler() {
    MeasureSampler mc;
    mc.draws = 2000;
    return mc;
}

void BM_density_mc(benchmark::State& st) {
    auto phi = fejer_test_function(0.2);
    for (auto _ : st) benchmark::DoNotOptimize(one_level_density(sampler(), phi, 20));
}

void BM_density_mc_serial(benchmark::State& st) {
    auto phi = fejer_test_function(0.2);
    for (auto _ : st) benchmark::DoNotOptimize(one_level_density_serial(sampler(), phi, 20));
}

// rank-one sum and lift generation have no separate serial path; the thread count is pinned instead
void BM_rank1(benchmark::State& st) {
    PoincareSpec s;
    s.c_max = 30;
    s.m_max = 30;
    int saved = omp_get_max_threads();
    omp_set_num_threads(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(rank1_partial({1, 0, 1}, s));
    omp_set_num_threads(saved);
}

void BM_sk_lift(benchmark::State& st) {
    auto plus = plus_space_form("phi10", 4 * 128);
    int saved = omp_get_max_threads();
    omp_set_num_threads(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(sk_lift(plus, 128));
    omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_hecke_apply)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hecke_apply_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_serial)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_density_mc)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_density_mc_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank1)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sk_lift)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
