#include <doctest.h>

#include <cmath>

#include "gkdv/errors.hpp"
#include "gkdv/rng.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/solver.hpp"

using namespace gkdv;

namespace {
Field random_band(const Grid& g, int lo, int hi, uint64_t seed) {
    Rng rng(seed);
    Field f = make_field(g, Representation::spectral, true);
    for (int k = lo; k <= hi; ++k) {
        const cdouble c{rng.normal(), rng.normal()};
        f.values[static_cast<size_t>(k)] = c;
        f.values[static_cast<size_t>(g.mode_count - k)] = std::conj(c);
    }
    return to_physical(f);
}
}  // namespace

TEST_CASE("pullback basics") {
    const Grid g = make_grid(60.0, 256);
    const Field w = random_band(g, 2, 20, 71);
    CHECK(l2_distance(pullback_state(w, 0.0), w) == 0.0);

    // along the free flow the pullback is constant in t
    const Field w1 = airy_propagate(w, 0.9);
    const Field w2 = airy_propagate(w, 2.7);
    CHECK(l2_distance(pullback_state(w1, 0.9), pullback_state(w2, 2.7)) / l2_norm(w) < 1e-11);
}

TEST_CASE("pullback after free evolution is the identity at checkpoints") {
    const Grid g = make_grid(60.0, 256);
    const Field w0 = random_band(g, 2, 20, 72);
    for (const double t : {0.5, 1.0, 2.0, 4.0}) {
        const Field wt = airy_propagate(w0, t);
        REQUIRE(l2_distance(pullback_state(wt, t), w0) / l2_norm(w0) < 1e-12);
    }
}

TEST_CASE("scattering distance on linear flow is zero with w_plus = w(0)") {
    const Grid g = make_grid(60.0, 256);
    Field w0 = random_band(g, 2, 20, 73);
    // make it exactly zero-mean for the homogeneous seminorm
    Field s = to_spectral(w0);
    s.values[0] = 0.0;
    w0 = to_physical(s);

    Trace tr;
    for (int n = 0; n <= 32; ++n)
        append_frame(tr, 0.1 * n, airy_propagate(w0, 0.1 * n));
    for (const double t : {0.5, 1.5, 3.0})
        REQUIRE(scattering_distance(tr, w0, t) / l2_norm(w0) < 1e-11);

    // w_plus equal to the pullback of a frame gives zero at that frame
    const Field wp = pullback_state(tr.fields[20], tr.times[20]);
    CHECK(scattering_distance(tr, wp, tr.times[20]) / l2_norm(w0) < 1e-11);
}

TEST_CASE("geometric checkpoints") {
    const auto cps = geometric_checkpoints(1.0, 1.5, 6.0);
    REQUIRE(cps.size() == 5);
    CHECK(cps[0] == 1.0);
    CHECK(cps[4] == doctest::Approx(5.0625));
    CHECK_THROWS_AS(geometric_checkpoints(5.0, 1.5, 6.0), ConfigInvalid);
}

TEST_CASE("mass bookkeeping of a decomposition is exact algebra") {
    const Grid g = make_grid(100.0, 512);
    const Field q = q_profile(g);
    Field w = random_band(g, 4, 20, 74);
    w = scale(w, 0.01 / l2_norm(w));
    const Field u = add(q, w);

    const double lhs = mass_integral(u);
    double cross = 0.0;
    for (int j = 0; j < g.mode_count; ++j)
        cross += q.values[static_cast<size_t>(j)].real() * w.values[static_cast<size_t>(j)].real();
    cross *= g.dx();
    const double rhs = mass_integral(q) + 2.0 * cross + mass_integral(w);
    CHECK(std::abs(lhs - rhs) / lhs < 1e-12);
}

TEST_CASE("decoupling check on the exact soliton with zero radiation") {
    const Grid g = make_grid(100.0, 1024);
    const Field u0 = q_profile(g);
    const Field zero = make_field(g);
    const Report r = decoupling_check(u0, 1.0, zero);
    CHECK(std::abs(r.value("mass_residual")) < 1e-10);
    CHECK(std::abs(r.value("energy_residual")) < 1e-10);
    // the printed +1/10 coefficient does not match the oracle -1/14
    CHECK(std::abs(r.value("energy_residual_printed_tenth")) > 0.1);
}

TEST_CASE("duhamel accumulate on the zero-radiation branch") {
    // w identically zero along an exact soliton path: E and (w^4)_x vanish,
    // so the accumulated state is w(0) = 0 exactly
    const Grid g = make_grid(100.0, 512);
    Decomposition dec;
    dec.epsilon = 0.0;
    for (int n = 0; n <= 20; ++n) {
        const double t = 0.05 * n;
        append_frame(dec.w, t, make_field(g));
        dec.path.times.push_back(t);
        dec.path.lambda.push_back(1.0);
        dec.path.x.push_back(t);
        dec.path.lambda_prime.push_back(0.0);
        dec.path.x_prime.push_back(1.0);
        dec.path.fit_residual.push_back(0.0);
    }
    const Field acc = duhamel_accumulate(dec, Window{0.0, 1.0});
    CHECK(l2_norm(acc) < 1e-12);
}

TEST_CASE("duhamel output stays at fit-residual scale on a soliton-only run") {
    const Grid g = make_grid(100.0, 512);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 25;
    cfg.frame_speed = 1.0;
    RunState st = evolve(q_profile(g), cfg);
    Decomposition dec = decompose_trace(st.trace, 0.0);
    const Field acc = duhamel_accumulate(dec, Window{0.0, 1.0});
    // pure soliton: w is solver-error sized, and so is the accumulated state
    CHECK(l2_norm(acc) < 1e-5);
}
