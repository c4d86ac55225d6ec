#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gkdv/errors.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/rng.hpp"
#include "gkdv/soliton.hpp"
#include "gkdv/solver.hpp"

using namespace gkdv;

namespace {
constexpr double pi = std::numbers::pi;

Field random_band(const Grid& g, int lo, int hi, uint64_t seed) {
    Rng rng(seed);
    Field f = make_field(g, Representation::spectral, true);
    for (int k = lo; k <= hi; ++k) {
        const cdouble c{rng.normal(), rng.normal()};
        f.values[static_cast<size_t>(k)] = c;
        f.values[static_cast<size_t>(g.mode_count - k)] = std::conj(c);
    }
    return f;
}

Trace airy_trace(const Field& u0, double t_span, int frames) {
    Trace tr;
    for (int n = 0; n < frames; ++n) {
        const double t = t_span * n / (frames - 1);
        append_frame(tr, t, to_physical(airy_propagate(u0, t)));
    }
    return tr;
}

ModulationPath unit_speed_path(const Trace& tr) {
    ModulationPath p;
    for (size_t i = 0; i < tr.frames(); ++i) {
        p.times.push_back(tr.times[i]);
        p.x.push_back(tr.times[i]);
        p.lambda.push_back(1.0);
        p.lambda_prime.push_back(0.0);
        p.x_prime.push_back(1.0);
        p.fit_residual.push_back(0.0);
    }
    return p;
}
}  // namespace

TEST_CASE("sobolev norm on single modes and s = 0") {
    const Grid g = make_grid(50.0, 256);
    Field mode = make_field(g, Representation::spectral, false);
    mode.values[9] = {1.0, 0.0};
    const double xi = 9.0 * g.dxi();
    const double l2 = l2_norm(mode);
    for (const double s : {0.5, -0.25, 1.0}) {
        const double value = sobolev_norm(mode, s, true);
        REQUIRE(std::abs(value - std::pow(xi, s) * l2) < 1e-12 * value);
    }
    const Field f = to_physical(random_band(g, 1, 100, 51));
    CHECK(std::abs(sobolev_norm(f, 0.0, true) - l2_norm(f)) < 1e-12 * l2_norm(f));
}

TEST_CASE("inhomogeneous and homogeneous agree at high frequency") {
    const Grid g = make_grid(5.0, 512);  // dxi = 2pi/5: modes 80.. are |xi| >= 100
    const Field f = to_physical(random_band(g, 85, 160, 52));
    const double a = sobolev_norm(f, 0.75, true);
    const double b = sobolev_norm(f, 0.75, false);
    CHECK(std::abs(a - b) / b < 0.01);
}

TEST_CASE("spacetime norm basics") {
    const Grid g = make_grid(50.0, 128);
    const Field u0 = to_physical(random_band(g, 1, 30, 53));
    Trace constant;
    for (int n = 0; n < 9; ++n) append_frame(constant, 0.1 * n, u0);
    const Window w{0.0, 0.8};

    SUBCASE("constant in time with q = inf reduces to one spatial norm") {
        const double got = spacetime_norm(constant, kInf, 4.0, w);
        double acc = 0.0;
        for (const auto& v : u0.values) acc += std::pow(std::abs(v), 4.0);
        CHECK(std::abs(got - std::pow(acc * g.dx(), 0.25)) < 1e-12 * got);
    }
    SUBCASE("L2L2 equals sqrt(window) * L2 for constant data") {
        const double got = spacetime_norm(constant, 2.0, 2.0, w);
        CHECK(std::abs(got - std::sqrt(0.8) * l2_norm(u0)) < 1e-10 * got);
    }
}

TEST_CASE("soliton trace L6 against dense quadrature") {
    // translate of Q at speed 1: the L6 norm over [0,1] equals
    // (1 * int Q^6 dx)^{1/6} up to quadrature error
    const Grid g = make_grid(60.0, 512);
    Trace tr;
    for (int n = 0; n <= 100; ++n)
        append_frame(tr, 0.01 * n, scaled_soliton(g, SolitonParams{1.0, 0.01 * n}));
    const double got = spacetime_norm(tr, 6.0, 6.0, Window{0.0, 1.0});

    double q6 = 0.0;  // dense quadrature oracle, 16x the grid resolution
    const int n_fine = 16 * 512;
    const double h = 60.0 / n_fine;
    for (int j = 0; j < n_fine; ++j) {
        const double q = q_value(-30.0 + j * h);
        q6 += std::pow(q, 6.0) * h;
    }
    const double expected = std::pow(q6 * 1.0, 1.0 / 6.0);
    CHECK(std::abs(got - expected) / expected < 1e-6);
}

TEST_CASE("xsb shell placement for a pure spacetime exponential") {
    const Grid g = make_grid(10.0, 64);
    // e^{i(xi_1 x + tau_1 t)} with xi_1 = 3 dxi; choose tau_1 on the tau grid
    const double t_span = 8.0;
    const int frames = 128;
    Field mode = make_field(g, Representation::spectral, false);
    mode.values[3] = {1.0, 0.0};
    const double xi1 = 3.0 * g.dxi();
    const double tau1 = 2.0 * pi / t_span * 20.0;
    Trace tr;
    for (int n = 0; n < frames; ++n) {
        const double t = t_span * n / frames;  // exactly periodic sampling
        append_frame(tr, t, scale(mode, std::exp(cdouble{0.0, tau1 * t})));
    }
    tr.uniform_dt = true;
    XsbShellProfile prof;
    xsb_norm(tr, 0.5, 2.0, Window{0.0, t_span}, &prof, 1e-9);  // negligible taper

    const double dist = std::abs(tau1 - xi1 * xi1 * xi1);
    const int expect_shell = static_cast<int>(std::floor(std::log2(dist)));
    size_t peak = 0;
    for (size_t i = 1; i < prof.shell_mass.size(); ++i)
        if (prof.shell_mass[i] > prof.shell_mass[peak]) peak = i;
    CHECK(prof.shell_index[peak] == expect_shell);
    // essentially all mass in that shell
    double total = 0.0;
    for (double m : prof.shell_mass) total += m * m;
    CHECK(prof.shell_mass[peak] * prof.shell_mass[peak] / total > 0.999);
}

TEST_CASE("xsb norm ignores spatial translation") {
    const Grid g = make_grid(40.0, 128);
    const Field u0 = to_physical(random_band(g, 2, 10, 54));
    Trace a = airy_trace(u0, 4.0, 128);
    Trace b;
    for (size_t i = 0; i < a.frames(); ++i) {
        Field s = to_spectral(a.fields[i]);
        for (int j = 0; j < g.mode_count; ++j)
            s.values[j] *= std::exp(cdouble{0.0, -g.wavenumber(j) * 7.3});
        append_frame(b, a.times[i], to_physical(s));
    }
    const double na = xsb_norm(a, 0.5, 2.0, Window{0.0, 4.0});
    const double nb = xsb_norm(b, 0.5, 2.0, Window{0.0, 4.0});
    CHECK(std::abs(na - nb) / na < 1e-10);
}

TEST_CASE("xsb window guard") {
    const Grid g = make_grid(40.0, 128);
    Trace tr = airy_trace(to_physical(random_band(g, 2, 10, 55)), 1.0, 32);
    CHECK_THROWS_AS(xsb_norm(tr, 0.5, 2.0, Window{0.0, 1.0}), WindowTooShort);
}

TEST_CASE("free airy trace concentrates near the dispersion surface") {
    const Grid g = make_grid(40.0, 128);
    const Field u0 = to_physical(random_band(g, 2, 10, 56));
    Trace tr = airy_trace(u0, 6.0, 192);
    XsbShellProfile prof;
    xsb_norm(tr, 0.5, kInf, Window{0.0, 6.0}, &prof);
    // the peak shell must sit at small |tau - xi^3| and the profile must
    // decay for a few shells above it before hitting taper leakage
    size_t peak = 0;
    for (size_t i = 1; i < prof.shell_mass.size(); ++i)
        if (prof.shell_mass[i] > prof.shell_mass[peak]) peak = i;
    REQUIRE(peak + 3 < prof.shell_mass.size());
    CHECK(prof.shell_mass[peak + 1] <= prof.shell_mass[peak]);
    CHECK(prof.shell_mass[peak + 2] <= prof.shell_mass[peak + 1]);
}

TEST_CASE("kato weighted integral: zero field and gaussian oracle") {
    const Grid g = make_grid(60.0, 512);
    Trace zero;
    for (int n = 0; n < 5; ++n) append_frame(zero, 0.1 * n, make_field(g));
    ModulationPath path = unit_speed_path(zero);
    CHECK(kato_weighted_integral(zero, path, 1.0, true) == 0.0);

    // static gaussian bump far from the path: closed-form weight oracle
    // int exp(-sigma|x - c|) exp(-2 (x-a)^2 / s^2) dx with |a - c| >> s
    // ~= exp(-sigma (a - c)) int exp(sigma y) exp(-2 y^2 / s^2) dy (y = x-a, c < a)
    const double a = 14.0, s = 1.0, sigma = 0.7;
    Field bump = make_field(g);
    for (int j = 0; j < g.mode_count; ++j) {
        const double x = g.point(j);
        bump.values[j] = std::exp(-(x - a) * (x - a) / (s * s));
    }
    Trace tr;
    for (int n = 0; n < 5; ++n) append_frame(tr, 0.1 * n, bump);
    ModulationPath origin;
    for (int n = 0; n < 5; ++n) {
        origin.times.push_back(0.1 * n);
        origin.x.push_back(0.0);
        origin.lambda.push_back(1.0);
        origin.lambda_prime.push_back(0.0);
        origin.x_prime.push_back(0.0);
        origin.fit_residual.push_back(0.0);
    }
    const double got = kato_weighted_integral(tr, origin, sigma, false);
    // closed form: |bump|^2 = exp(-2(x-a)^2/s^2); gaussian integral against
    // the exponential weight on the dominant (left) side
    const double gauss =
        std::exp(-sigma * a) * std::sqrt(pi * s * s / 2.0) * std::exp(sigma * sigma * s * s / 8.0);
    const double expected = 0.4 * gauss;  // time window length
    CHECK(std::abs(got - expected) / expected < 0.01);
}

TEST_CASE("kato identity monitor on the free flow") {
    const Grid g = make_grid(80.0, 512);
    Field u0 = to_physical(random_band(g, 2, 24, 57));
    u0 = scale(u0, 1.0 / l2_norm(u0));
    Trace tr = airy_trace(u0, 2.0, 201);
    const ModulationPath path = unit_speed_path(tr);
    const Report r = kato_identity_monitor(tr, path, 100.0);
    CHECK(r.value("mean_abs_residual_per_unit_time") < 1e-6);
    CHECK(r.value("max_weighted_mass_increase") < 1e-9);

    // zero field -> zero residual
    Trace zero;
    for (int n = 0; n < 5; ++n) append_frame(zero, 0.1 * n, make_field(g));
    const Report rz = kato_identity_monitor(zero, unit_speed_path(zero), 100.0);
    CHECK(rz.value("mean_abs_residual_per_unit_time") == 0.0);
}

TEST_CASE("bilinear functional basics") {
    const Grid g = make_grid(50.0, 256);
    const Window w{0.0, 2.0};
    Trace zero;
    for (int n = 0; n < 65; ++n) append_frame(zero, 2.0 * n / 64.0, make_field(g));
    Trace some = airy_trace(to_physical(random_band(g, 3, 12, 58)), 2.0, 65);
    CHECK(bilinear_functional(zero, some, w) == 0.0);

    // diagonal single modes annihilate the weight
    Field mode = make_field(g, Representation::spectral, false);
    mode.values[9] = {1.0, 0.0};
    Trace tm = airy_trace(mode, 2.0, 65);
    CHECK(bilinear_functional(tm, tm, w) < 1e-14);

    // symmetry in the two arguments
    Trace ta = airy_trace(to_physical(random_band(g, 3, 12, 59)), 2.0, 65);
    Trace tb = airy_trace(to_physical(random_band(g, 20, 30, 60)), 2.0, 65);
    const double ab = bilinear_functional(ta, tb, w);
    const double ba = bilinear_functional(tb, ta, w);
    CHECK(std::abs(ab - ba) / ab < 1e-12);
}

TEST_CASE("quartilinear functional basics") {
    const Grid g = make_grid(50.0, 128);
    const Window w{0.0, 1.0};
    Trace zero;
    for (int n = 0; n < 33; ++n) append_frame(zero, n / 32.0, make_field(g));
    Trace u = airy_trace(to_physical(random_band(g, 2, 10, 61)), 1.0, 33);
    const std::array<const Trace*, 4> with_zero{&u, &zero, &u, &u};
    CHECK(quartilinear_functional(with_zero, w) == 0.0);

    const std::array<const Trace*, 4> all{&u, &u, &u, &u};
    const double val = quartilinear_functional(all, w);
    CHECK(val > 0.0);
    CHECK(std::isfinite(val));

    // scaling covariance: lambda-rescaled inputs on the lambda-scaled box
    // over the lambda^3 window give an invariant ratio (finite-window 5%)
    const double lam = 1.25;
    const Grid g2 = make_grid(50.0 * lam, 128);
    Field u0s = make_field(g2, Representation::physical, true);
    const Field u0p = to_physical(random_band(g, 2, 10, 61));
    const double amp = std::pow(lam, -2.0 / 3.0);
    for (int j = 0; j < g2.mode_count; ++j) u0s.values[j] = amp * u0p.values[j].real();
    Trace us = airy_trace(u0s, lam * lam * lam, 33);
    const std::array<const Trace*, 4> alls{&us, &us, &us, &us};
    const double vals = quartilinear_functional(alls, Window{0.0, lam * lam * lam});

    auto denom = [&](const Field& f) {
        const double n = sobolev_norm(f, -0.25, true);
        return n * n * n * n;
    };
    const double ratio1 = val / denom(u0p);
    const double ratio2 = vals / denom(u0s);
    CHECK(std::abs(ratio1 - ratio2) / ratio1 < 0.05);

    // nonzero mean rejected
    Field biased = to_physical(random_band(g, 2, 10, 62));
    for (auto& v : biased.values) v += 0.1;
    Trace tb = airy_trace(biased, 1.0, 33);
    const std::array<const Trace*, 4> bad{&tb, &tb, &tb, &tb};
    CHECK_THROWS_AS(quartilinear_functional(bad, w), NegativeOrderOnNonzeroMean);
}

TEST_CASE("strichartz sampler contract") {
    StrichartzEnsembleSpec spec;
    spec.grid = make_grid(50.0, 256);
    spec.ensemble_size = 0;
    CHECK(strichartz_constant_sampler(spec).empty());

    spec.ensemble_size = 5;
    spec.seed = 9;
    spec.band_min = 2;
    spec.band_max = 24;
    spec.t_span = 1.0;
    spec.frames = 33;
    const auto samples = strichartz_constant_sampler(spec);
    CHECK(samples.size() == 25);  // five ratios per sample
    for (const auto& s : samples) {
        REQUIRE(std::isfinite(s.ratio));
        REQUIRE(s.denominator > 0.0);
        if (s.functional == "LinftL2x_vs_L2") REQUIRE(std::abs(s.ratio - 1.0) < 1e-13);
    }
}
