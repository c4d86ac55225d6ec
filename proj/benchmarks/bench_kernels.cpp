#include <benchmark/benchmark.h>

#include "gkdv/dealias.hpp"
#include "gkdv/rng.hpp"
#include "gkdv/soliton.hpp"
#include "gkdv/solver.hpp"

namespace {

gkdv::Field band_field(const gkdv::Grid& g, int band, uint64_t seed) {
    gkdv::Rng rng(seed);
    gkdv::Field f = gkdv::make_field(g, gkdv::Representation::spectral, true);
    for (int k = 1; k <= band; ++k) {
        const gkdv::cdouble c{rng.normal(), rng.normal()};
        f.values[static_cast<size_t>(k)] = c;
        f.values[static_cast<size_t>(g.mode_count - k)] = std::conj(c);
    }
    return gkdv::to_physical(f);
}

void bm_transform(benchmark::State& state) {
    const gkdv::Grid g = gkdv::make_grid(100.0, static_cast<int>(state.range(0)));
    const gkdv::Field f = band_field(g, g.dealias_keep / 2, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gkdv::to_spectral(f));
    }
}
BENCHMARK(bm_transform)->Arg(1024)->Arg(4096);

void bm_dealiased_quartic(benchmark::State& state) {
    const gkdv::Grid g = gkdv::make_grid(100.0, static_cast<int>(state.range(0)));
    const gkdv::Field f = band_field(g, g.dealias_keep / 2, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gkdv::dealiased_power(f, 4));
    }
}
BENCHMARK(bm_dealiased_quartic)->Arg(1024)->Arg(2048);

void bm_solver_step(benchmark::State& state) {
    const gkdv::Grid g = gkdv::make_grid(100.0, static_cast<int>(state.range(0)));
    gkdv::SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1e-3;
    gkdv::RunState st;
    st.u = gkdv::q_profile(g);
    st.time = 0.0;
    for (auto _ : state) {
        gkdv::step(st, cfg);
        st.time = 0.0;
    }
}
BENCHMARK(bm_solver_step)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
