#include "gkdv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gkdv/dealias.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/fft.hpp"

namespace gkdv {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// phi_k(z) = (e^z - sum_{j<k} z^j/j!) / z^k evaluated stably by averaging
// over a unit circle centred at z (Kassam-Trefethen contour trick).
struct PhiTable {
    std::vector<cdouble> phi1, phi2, phi3;
};

PhiTable phi_functions(const std::vector<cdouble>& z) {
    constexpr int npts = 64;
    PhiTable t;
    const size_t n = z.size();
    t.phi1.assign(n, {});
    t.phi2.assign(n, {});
    t.phi3.assign(n, {});
    std::vector<cdouble> circle(npts);
    for (int i = 0; i < npts; ++i) {
        const double theta = two_pi * (i + 0.5) / npts;
        circle[i] = {std::cos(theta), std::sin(theta)};
    }
    for (size_t j = 0; j < n; ++j) {
        cdouble s1{}, s2{}, s3{};
        for (int i = 0; i < npts; ++i) {
            const cdouble w = z[j] + circle[i];
            const cdouble ew = std::exp(w);
            s1 += (ew - 1.0) / w;
            s2 += (ew - 1.0 - w) / (w * w);
            s3 += (ew - 1.0 - w - 0.5 * w * w) / (w * w * w);
        }
        t.phi1[j] = s1 / static_cast<double>(npts);
        t.phi2[j] = s2 / static_cast<double>(npts);
        t.phi3[j] = s3 / static_cast<double>(npts);
    }
    return t;
}

// Per-(grid, dt, frame) multiplier tables plus the nonlinear evaluation.
struct Stepper {
    Grid grid;
    SolverConfig cfg;
    double blowup_ceiling = 0.0;
    std::vector<cdouble> e_full, e_half;        // exp(h L), exp(h L / 2)
    std::vector<cdouble> f1, f2, f3, q_half;    // ETDRK4 weights
    std::vector<cdouble> frame_shift;           // exp(-i c h xi): frame -> lab per step
    std::vector<cdouble> ixi;                   // i xi (Nyquist zeroed)

    Stepper(const Grid& g, const SolverConfig& c, double u0_max) : grid(g), cfg(c) {
        blowup_ceiling = cfg.blowup_ceiling_factor * std::max(u0_max, 1e-30);
        const int m = g.mode_count;
        const double h = cfg.dt;
        std::vector<cdouble> hl(m);
        e_full.resize(m);
        e_half.resize(m);
        frame_shift.resize(m);
        ixi.resize(m);
        for (int j = 0; j < m; ++j) {
            const double xi = g.wavenumber(j);
            const double omega = xi * xi * xi + cfg.frame_speed * xi;
            hl[j] = cdouble{0.0, h * omega};
            e_full[j] = std::exp(hl[j]);
            e_half[j] = std::exp(cdouble{0.0, 0.5 * h * omega});
            frame_shift[j] = std::exp(cdouble{0.0, -cfg.frame_speed * h * xi});
            const bool nyquist = g.signed_index(j) == -m / 2;
            ixi[j] = nyquist ? cdouble{0.0, 0.0} : cdouble{0.0, xi};
        }
        if (cfg.scheme == TimeScheme::etdrk4) {
            const PhiTable full = phi_functions(hl);
            std::vector<cdouble> hl2(m);
            for (int j = 0; j < m; ++j) hl2[j] = 0.5 * hl[j];
            const PhiTable half = phi_functions(hl2);
            f1.resize(m);
            f2.resize(m);
            f3.resize(m);
            q_half.resize(m);
            for (int j = 0; j < m; ++j) {
                f1[j] = h * (full.phi1[j] - 3.0 * full.phi2[j] + 4.0 * full.phi3[j]);
                f2[j] = h * (2.0 * full.phi2[j] - 4.0 * full.phi3[j]);
                f3[j] = h * (4.0 * full.phi3[j] - full.phi2[j]);
                q_half[j] = 0.5 * h * half.phi1[j];
            }
        }
    }

    // N(u-hat) = -i xi (u^p)-hat with the dealiased product, band-truncated.
    std::vector<cdouble> nonlinear(const std::vector<cdouble>& uhat, double when,
                                   bool check_blowup) const {
        Field f;
        f.grid = grid;
        f.values = uhat;
        f.rep = Representation::spectral;
        f.real_valued = false;  // intermediate stages may carry phases
        if (check_blowup) {
            const double amp = max_abs(f);
            if (!std::isfinite(amp) || amp > blowup_ceiling)
                throw BlowupDetected("solver: amplitude ceiling exceeded", when);
        }
        Field p = dealiased_power(f, cfg.nonlinearity_power);
        std::vector<cdouble> out(p.values.size());
        for (size_t j = 0; j < out.size(); ++j) out[j] = -ixi[j] * p.values[j];
        return out;
    }
};

void band_truncate(const Grid& g, std::vector<cdouble>& spec) {
    for (int j = 0; j < g.mode_count; ++j)
        if (!g.in_band(j)) spec[j] = 0.0;
}

void etdrk4_step(const Stepper& st, std::vector<cdouble>& v, double t) {
    const size_t m = v.size();
    const auto& e = st.e_full;
    const auto& e2 = st.e_half;
    std::vector<cdouble> nv = st.nonlinear(v, t, true);
    std::vector<cdouble> a(m), b(m), c(m);
    for (size_t j = 0; j < m; ++j) a[j] = e2[j] * v[j] + st.q_half[j] * nv[j];
    std::vector<cdouble> na = st.nonlinear(a, t, false);
    for (size_t j = 0; j < m; ++j) b[j] = e2[j] * v[j] + st.q_half[j] * na[j];
    std::vector<cdouble> nb = st.nonlinear(b, t, false);
    for (size_t j = 0; j < m; ++j) c[j] = e2[j] * a[j] + st.q_half[j] * (2.0 * nb[j] - nv[j]);
    std::vector<cdouble> nc = st.nonlinear(c, t, false);
    for (size_t j = 0; j < m; ++j)
        v[j] = e[j] * v[j] + st.f1[j] * nv[j] + st.f2[j] * (na[j] + nb[j]) + st.f3[j] * nc[j];
}

void lawson_step(const Stepper& st, std::vector<cdouble>& v, double t) {
    const size_t m = v.size();
    const double h = st.cfg.dt;
    const auto& e = st.e_full;
    const auto& e2 = st.e_half;
    std::vector<cdouble> k1 = st.nonlinear(v, t, true);
    std::vector<cdouble> stage(m);
    for (size_t j = 0; j < m; ++j) stage[j] = e2[j] * (v[j] + 0.5 * h * k1[j]);
    std::vector<cdouble> k2 = st.nonlinear(stage, t, false);
    for (size_t j = 0; j < m; ++j) stage[j] = e2[j] * v[j] + 0.5 * h * k2[j];
    std::vector<cdouble> k3 = st.nonlinear(stage, t, false);
    for (size_t j = 0; j < m; ++j) stage[j] = e[j] * v[j] + h * e2[j] * k3[j];
    std::vector<cdouble> k4 = st.nonlinear(stage, t, false);
    for (size_t j = 0; j < m; ++j)
        v[j] = e[j] * v[j] +
               h / 6.0 * (e[j] * k1[j] + 2.0 * e2[j] * (k2[j] + k3[j]) + k4[j]);
}

// Advance the lab-frame spectrum by one dt.  The one-step map in the moving
// frame is autonomous; the trailing frame_shift phase undoes the frame
// translation so the state stays lab-frame (translation commutes exactly
// with the dealiased product).
void advance(const Stepper& st, std::vector<cdouble>& uhat, double t) {
    if (!st.cfg.nonlinearity_enabled) {
        for (size_t j = 0; j < uhat.size(); ++j)
            uhat[j] *= st.e_full[j] * st.frame_shift[j];
        return;
    }
    if (st.cfg.scheme == TimeScheme::etdrk4)
        etdrk4_step(st, uhat, t);
    else
        lawson_step(st, uhat, t);
    if (st.cfg.frame_speed != 0.0)
        for (size_t j = 0; j < uhat.size(); ++j) uhat[j] *= st.frame_shift[j];
}

void enforce_real(Field& f) {
    if (f.rep == Representation::physical) {
        for (auto& v : f.values) v = cdouble{v.real(), 0.0};
    }
}

}  // namespace

Field airy_propagate(const Field& u0, double t) {
    if (t == 0.0) return u0;
    Field g = to_spectral(u0);
    for (size_t j = 0; j < g.values.size(); ++j) {
        const double xi = g.grid.wavenumber(static_cast<int>(j));
        g.values[j] *= std::exp(cdouble{0.0, t * xi * xi * xi});
    }
    return (u0.rep == Representation::physical) ? to_physical(g) : g;
}

double mass_integral(const Field& u) {
    const double n = l2_norm(u);
    return n * n;
}

double energy_integral(const Field& u) {
    const Field ux = derivative(u, 1);
    const Field up = to_physical(u);
    const Field uxp = to_physical(ux);
    double acc = 0.0;
    for (size_t j = 0; j < up.values.size(); ++j) {
        const double a = up.values[j].real();
        const double b = uxp.values[j].real();
        acc += 0.5 * b * b - 0.2 * a * a * a * a * a;
    }
    return acc * u.grid.dx();
}

double max_stable_dt(const Field& u0, double cfl_constant) {
    const double amp = max_abs(u0);
    const double ximax = u0.grid.max_retained_wavenumber();
    if (amp <= 0.0) return std::numeric_limits<double>::infinity();
    return cfl_constant / (amp * amp * amp * ximax);
}

double wrap_horizon(const Field& u0, double quantile) {
    const Field s = to_spectral(u0);
    // spectral-mass quantile of |xi|
    std::vector<std::pair<double, double>> by_xi;  // (|xi|, |coef|^2)
    double total = 0.0;
    for (size_t j = 0; j < s.values.size(); ++j) {
        const double w = std::norm(s.values[j]);
        by_xi.emplace_back(std::abs(s.grid.wavenumber(static_cast<int>(j))), w);
        total += w;
    }
    std::sort(by_xi.begin(), by_xi.end());
    double acc = 0.0, xi_q = 0.0;
    for (const auto& [axi, w] : by_xi) {
        acc += w;
        xi_q = axi;
        if (acc >= quantile * total) break;
    }
    const double v_max = std::max(3.0 * xi_q * xi_q, 1.0);
    return u0.grid.box_length / (2.0 * v_max);
}

void step(RunState& state, const SolverConfig& cfg) {
    Field uhat = to_spectral(state.u);
    Stepper st(uhat.grid, cfg, max_abs(state.u));
    band_truncate(uhat.grid, uhat.values);
    advance(st, uhat.values, state.time);
    uhat.real_valued = state.u.real_valued;
    Field next = (state.u.rep == Representation::physical) ? to_physical(uhat) : uhat;
    if (cfg.sponge) next = apply_sponge(next, *cfg.sponge, cfg.dt);
    enforce_real(next);
    state.u = std::move(next);
    state.time += cfg.dt;
}

RunState evolve(const Field& u0, const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigInvalid("evolve: dt must be positive");
    if (cfg.snapshot_stride < 1) throw ConfigInvalid("evolve: snapshot_stride must be >= 1");
    if (cfg.nonlinearity_enabled) {
        const double dt_max = max_stable_dt(u0, cfg.cfl_constant);
        if (cfg.dt > dt_max)
            throw ConfigInvalid("evolve: dt exceeds the nonlinear admissibility bound " +
                                std::to_string(dt_max));
    }
    const long total_steps = std::lround(cfg.t_end / cfg.dt);
    if (std::abs(total_steps * cfg.dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end))
        throw ConfigInvalid("evolve: t_end must be an integer number of steps");

    RunState state;
    state.u = u0;
    state.time = 0.0;

    Field uhat = to_spectral(u0);
    band_truncate(uhat.grid, uhat.values);
    Stepper st(uhat.grid, cfg, max_abs(u0));

    auto snapshot = [&](double t) {
        uhat.real_valued = u0.real_valued;
        Field lab = to_physical(uhat);
        enforce_real(lab);
        append_frame(state.trace, t, lab);
        state.mass_history.push_back(mass_integral(lab));
        state.energy_history.push_back(energy_integral(lab));
        state.u = std::move(lab);
    };

    snapshot(0.0);
    for (long n = 1; n <= total_steps; ++n) {
        const double t_before = (n - 1) * cfg.dt;
        advance(st, uhat.values, t_before);
        if (cfg.sponge) {
            uhat.real_valued = u0.real_valued;
            Field lab = to_physical(uhat);
            enforce_real(lab);
            lab = apply_sponge(lab, *cfg.sponge, cfg.dt);
            uhat = to_spectral(lab);
        }
        if (n % cfg.snapshot_stride == 0) snapshot(n * cfg.dt);
    }
    state.time = total_steps * cfg.dt;
    if (state.trace.times.empty() || state.trace.times.back() != state.time) {
        // state.u must reflect the final time even off the snapshot stride
        uhat.real_valued = u0.real_valued;
        Field lab = to_physical(uhat);
        enforce_real(lab);
        state.u = std::move(lab);
    }
    return state;
}

Field apply_sponge(const Field& f, const SpongeConfig& sponge, double dt) {
    if (!(sponge.width > 0.0) || sponge.strength < 0.0)
        throw ConfigInvalid("apply_sponge: bad sponge parameters");
    Field p = to_physical(f);
    const double half = 0.5 * p.grid.box_length;
    for (int j = 0; j < p.grid.mode_count; ++j) {
        const double x = p.grid.point(j);
        const double d = half - std::abs(x);  // distance to the nearer edge
        if (d >= sponge.width) continue;
        const double sigma = sponge.strength * smoothstep(1.0 - d / sponge.width);
        p.values[j] *= std::exp(-dt * sigma);
    }
    return (f.rep == Representation::spectral) ? to_spectral(p) : p;
}

}  // namespace gkdv
