#include <doctest.h>

#include <cmath>

#include "gkdv/errors.hpp"
#include "gkdv/rng.hpp"
#include "gkdv/soliton.hpp"
#include "gkdv/solver.hpp"

using namespace gkdv;

namespace {
Field random_band(const Grid& g, int band, uint64_t seed) {
    Rng rng(seed);
    Field f = make_field(g, Representation::spectral, true);
    for (int k = 1; k <= band; ++k) {
        const cdouble c{rng.normal(), rng.normal()};
        f.values[static_cast<size_t>(k)] = c;
        f.values[static_cast<size_t>(g.mode_count - k)] = std::conj(c);
    }
    return to_physical(f);
}
}  // namespace

TEST_CASE("airy propagator basics") {
    const Grid g = make_grid(40.0, 128);
    const Field u0 = random_band(g, 40, 31);

    SUBCASE("t = 0 is the identity") {
        const Field u = airy_propagate(u0, 0.0);
        CHECK(l2_distance(u, u0) == 0.0);
    }
    SUBCASE("unitary and reversible") {
        const Field u = airy_propagate(u0, 1.7);
        CHECK(std::abs(l2_norm(u) - l2_norm(u0)) < 1e-13 * l2_norm(u0));
        CHECK(l2_distance(airy_propagate(u, -1.7), u0) / l2_norm(u0) < 1e-12);
    }
}

TEST_CASE("zero data stays zero") {
    const Grid g = make_grid(40.0, 128);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_end = 0.1;
    RunState st = evolve(make_field(g), cfg);
    CHECK(l2_norm(st.u) == 0.0);
}

TEST_CASE("linear-only stepping equals the airy propagator") {
    const Grid g = make_grid(40.0, 128);
    const Field u0 = random_band(g, 30, 32);
    SolverConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.5;
    cfg.nonlinearity_enabled = false;
    cfg.snapshot_stride = 10;
    RunState st = evolve(u0, cfg);
    for (size_t i = 0; i < st.trace.frames(); ++i) {
        const Field free = airy_propagate(u0, st.trace.times[i]);
        REQUIRE(l2_distance(st.trace.fields[i], free) / l2_norm(u0) < 1e-11);
    }
}

TEST_CASE("single step with nonlinearity off matches airy, both schemes") {
    const Grid g = make_grid(40.0, 128);
    const Field u0 = random_band(g, 30, 33);
    for (const TimeScheme scheme : {TimeScheme::etdrk4, TimeScheme::lawson_ifrk4}) {
        SolverConfig cfg;
        cfg.dt = 1e-2;
        cfg.nonlinearity_enabled = false;
        cfg.scheme = scheme;
        RunState st;
        st.u = u0;
        st.time = 0.0;
        step(st, cfg);
        const Field want = airy_propagate(u0, cfg.dt);
        REQUIRE(l2_distance(st.u, want) / l2_norm(u0) < 1e-12);
    }
}

TEST_CASE("soliton transport in the soliton-adapted frame") {
    const Grid g = make_grid(100.0, 512);
    const Field u0 = q_profile(g);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 2.0;
    cfg.snapshot_stride = 100;
    cfg.frame_speed = 1.0;
    RunState st = evolve(u0, cfg);
    const Field exact = scaled_soliton(g, SolitonParams{1.0, 2.0});
    CHECK(l2_distance(st.u, exact) / l2_norm(exact) < 1e-8);
    CHECK(std::abs(st.mass_history.back() - st.mass_history.front()) /
              st.mass_history.front() <
          1e-11);
}

TEST_CASE("frame speed does not change the physics") {
    const Grid g = make_grid(60.0, 256);
    Field u0 = random_band(g, 20, 34);
    u0 = scale(u0, 0.1 / max_abs(u0));
    SolverConfig a;
    a.dt = 1e-3;
    a.t_end = 0.2;
    a.frame_speed = 0.0;
    SolverConfig b = a;
    b.frame_speed = 1.0;
    RunState sa = evolve(u0, a);
    RunState sb = evolve(u0, b);
    CHECK(l2_distance(sa.u, sb.u) / l2_norm(sa.u) < 1e-9);
}

TEST_CASE("fourth-order convergence of both schemes on a short soliton run") {
    const Grid g = make_grid(100.0, 512);
    const Field u0 = q_profile(g);
    const Field exact = scaled_soliton(g, SolitonParams{1.0, 1.0});
    for (const TimeScheme scheme : {TimeScheme::etdrk4, TimeScheme::lawson_ifrk4}) {
        auto err = [&](double dt) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.t_end = 1.0;
            cfg.snapshot_stride = static_cast<int>(std::lround(1.0 / dt));
            cfg.scheme = scheme;
            RunState st = evolve(u0, cfg);
            return l2_distance(st.u, exact) / l2_norm(exact);
        };
        const double ratio = err(2e-3) / err(1e-3);
        // fourth order with a visible next-order correction
        REQUIRE(ratio > 10.0);
        REQUIRE(ratio < 32.0);
    }
}

TEST_CASE("blowup guard trips on a forced spike") {
    const Grid g = make_grid(40.0, 128);
    Field u0 = random_band(g, 10, 35);
    u0 = scale(u0, 1.0 / max_abs(u0));
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.blowup_ceiling_factor = 0.5;  // ceiling below the initial amplitude
    CHECK_THROWS_AS(evolve(u0, cfg), BlowupDetected);
}

TEST_CASE("cfl admissibility bound is enforced") {
    const Grid g = make_grid(100.0, 1024);
    const Field u0 = q_profile(g);
    SolverConfig cfg;
    cfg.dt = 0.1;  // far beyond c / (max|u|^3 max|xi|)
    cfg.t_end = 1.0;
    CHECK_THROWS_AS(evolve(u0, cfg), ConfigInvalid);
}

TEST_CASE("sponge") {
    const Grid g = make_grid(80.0, 256);
    const SpongeConfig sponge{10.0, 2.0};

    SUBCASE("zero-strength sponge is the identity") {
        const Field f = random_band(g, 20, 36);
        const Field out = apply_sponge(f, SpongeConfig{10.0, 0.0}, 0.1);
        CHECK(l2_distance(out, f) < 1e-14 * l2_norm(f));
    }
    SUBCASE("center-supported field is untouched") {
        const Field q = q_profile(g);
        const Field out = apply_sponge(q, sponge, 0.1);
        CHECK(l2_distance(out, q) / l2_norm(q) < 1e-14);
    }
    SUBCASE("mass inside the layer strictly decreases") {
        Field f = make_field(g);
        for (int j = 0; j < g.mode_count; ++j) {
            const double x = g.point(j);
            f.values[j] = std::exp(-(x + 35.0) * (x + 35.0));  // parked in the layer
        }
        const Field out = apply_sponge(f, sponge, 0.1);
        CHECK(l2_norm(out) < l2_norm(f));
    }
    SUBCASE("left-moving airy packet decays through the sponge era") {
        // high-frequency packet: group velocity -3 xi^2
        Field f = make_field(g);
        for (int j = 0; j < g.mode_count; ++j) {
            const double x = g.point(j);
            f.values[j] = 0.05 * std::exp(-x * x / 4.0) * std::cos(3.0 * x);
        }
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 2.0;
        cfg.nonlinearity_enabled = false;
        cfg.sponge = sponge;
        RunState st = evolve(f, cfg);
        CHECK(l2_norm(st.u) < 0.7 * l2_norm(f));
    }
}

TEST_CASE("wrap horizon scales with the box and the data band") {
    const Grid g = make_grid(100.0, 512);
    const Field slow = random_band(g, 4, 37);
    const Field fast = random_band(g, 60, 38);
    CHECK(wrap_horizon(slow) > wrap_horizon(fast));
    CHECK(wrap_horizon(slow) <= 50.0 + 1e-9);  // soliton floor v >= 1
}

TEST_CASE("evolve records the documented snapshot count") {
    const Grid g = make_grid(100.0, 512);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 7;
    RunState st = evolve(q_profile(g), cfg);
    CHECK(st.trace.frames() == 100 / 7 + 1);
    CHECK(st.mass_history.size() == st.trace.frames());
}
