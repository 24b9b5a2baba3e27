#include <benchmark/benchmark.h>

#include <random>

#include "kfgm/evolution.hpp"
#include "kfgm/harness/experiments.hpp"
#include "kfgm/observables.hpp"

using namespace kfgm;

namespace {

KineticMatrix make(const char* tag, int n) {
    ScalarPotential p;
    p.profile.kind = SpatialProfile::Kind::quadratic;
    p.profile.s0 = 0.2;
    p.profile.s2 = 0.1;
    p.profile.x0 = 1.5;
    return assemble_kinetic(Grid::make(0.0, 3.141592653589793, n), p, 0.0, params_from_tag(tag),
                            PhysicalUnits{});
}

void BM_AssembleKinetic(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(make("rotation:0.7", n));
}
BENCHMARK(BM_AssembleKinetic)->Arg(128)->Arg(512);

void BM_Eigenmodes(benchmark::State& st) {
    KineticMatrix k = make("robin_mit_plus", static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(eigenmodes(k));
}
BENCHMARK(BM_Eigenmodes)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CayleyStep(benchmark::State& st) {
    KineticMatrix k = make("periodic", static_cast<int>(st.range(0)));
    DiscreteHamiltonian h = assemble_fv_hamiltonian(k);
    CayleyPropagator p(h, 1e-3);
    std::mt19937_64 rng(1);
    ModeSet ms = eigenmodes(k);
    CVec y = h.to_y(kfg_to_fv(generic_level_state(ms, {0, 1}, rng, MajoranaKind::none, 0.0), k.units));
    for (auto _ : st) {
        y = p.apply(y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_CayleyStep)->Arg(128)->Arg(512);

void BM_LocalFields(benchmark::State& st) {
    KineticMatrix k = make("dirichlet", 256);
    ModeSet ms = eigenmodes(k);
    std::mt19937_64 rng(2);
    KfgState s = generic_level_state(ms, {0, 1}, rng, MajoranaKind::plus, 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(global_summary(local_fields(s, k), k));
}
BENCHMARK(BM_LocalFields);

void BM_EnumerateConfining(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_confining_solutions(st.range(0), 1e-6, 7));
}
BENCHMARK(BM_EnumerateConfining)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
