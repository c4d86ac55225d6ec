#include "gkdv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "gkdv/dealias.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/fft.hpp"
#include "gkdv/projections.hpp"
#include "gkdv/rng.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double wrap(double d, double box) { return std::remainder(d, box); }

// Trapezoid weights over the selected frames.
std::vector<double> time_weights(const Trace& tr, size_t first, size_t last) {
    std::vector<double> w(last - first + 1, 0.0);
    if (w.size() == 1) {
        w[0] = 1.0;  // degenerate window: treat as unit mass
        return w;
    }
    for (size_t i = first; i < last; ++i) {
        const double h = tr.times[i + 1] - tr.times[i];
        w[i - first] += 0.5 * h;
        w[i + 1 - first] += 0.5 * h;
    }
    return w;
}

double spatial_lr(const Field& f, double r) {
    const Field p = to_physical(f);
    if (r == kInf) {
        double m = 0.0;
        for (const auto& v : p.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (const auto& v : p.values) acc += std::pow(std::abs(v), r);
    return std::pow(acc * p.grid.dx(), 1.0 / r);
}

}  // namespace

double sobolev_norm(const Field& f, double s, bool homogeneous, double mean_tol) {
    const Field g = to_spectral(f);
    if (homogeneous && s < 0.0) {
        const double rms = l2_norm(f) / std::sqrt(f.grid.box_length);
        if (std::abs(mean_value(f)) > mean_tol * std::max(rms, 1e-300))
            throw NegativeOrderOnNonzeroMean(
                "sobolev_norm: homogeneous negative order requires zero-mean data");
    }
    double acc = 0.0;
    for (size_t j = 0; j < g.values.size(); ++j) {
        const double xi = g.grid.wavenumber(static_cast<int>(j));
        double weight;
        if (homogeneous) {
            if (xi == 0.0) continue;
            weight = std::pow(std::abs(xi), 2.0 * s);
        } else {
            weight = std::pow(1.0 + xi * xi, s);
        }
        acc += weight * std::norm(g.values[j]);
    }
    return std::sqrt(acc * two_pi * g.grid.dxi());
}

double spacetime_norm(const Trace& tr, double q, double r, Window w) {
    validate_trace(tr);
    const auto [first, last] = frame_range(tr, w.t0, w.t1);
    if (q == kInf) {
        double m = 0.0;
        for (size_t i = first; i <= last; ++i) m = std::max(m, spatial_lr(tr.fields[i], r));
        return m;
    }
    const std::vector<double> tw = time_weights(tr, first, last);
    double acc = 0.0;
    for (size_t i = first; i <= last; ++i)
        acc += tw[i - first] * std::pow(spatial_lr(tr.fields[i], r), q);
    return std::pow(acc, 1.0 / q);
}

double xsb_norm(const Trace& tr, double b, double q_dyadic, Window w,
                XsbShellProfile* profile, double taper_fraction) {
    validate_trace(tr);
    if (!tr.uniform_dt) throw ConfigInvalid("xsb_norm: trace must have uniform dt");
    const auto [first, last] = frame_range(tr, w.t0, w.t1);
    const size_t nf = last - first + 1;
    if (nf < 64) throw WindowTooShort("xsb_norm: needs at least 64 frames in the window");

    const Grid& g = tr.grid();
    const int m = g.mode_count;
    const double dt = tr.dt();
    const double t_span = static_cast<double>(nf) * dt;  // periodized window
    const double dtau = two_pi / t_span;

    // smoothstep taper: identically 1 in the middle, exactly 0 at both window
    // edges so the periodized time axis sees no jump
    std::vector<double> taper(nf);
    const double ramp = std::max(taper_fraction * t_span, dt);
    for (size_t n = 0; n < nf; ++n) {
        const double t_rel = static_cast<double>(n) * dt;
        const double t_rev = static_cast<double>(nf - 1 - n) * dt;
        taper[n] = smoothstep(t_rel / ramp) * smoothstep(t_rev / ramp);
    }

    // spatial transform per frame, tapered
    std::vector<std::vector<cdouble>> spec(nf);
    for (size_t n = 0; n < nf; ++n) {
        Field s = to_spectral(tr.fields[first + n]);
        for (auto& v : s.values) v *= taper[n];
        spec[n] = std::move(s.values);
    }

    // time DFT per spatial mode; scale (dt / 2pi) discretises the continuum
    // (1/2pi) int e^{-i t tau} dt convention (phases drop in |.|^2)
    const int lowest_shell =
        static_cast<int>(std::floor(std::log2(std::max(dtau, 1e-300))));
    std::map<int, double> shell_mass2;
    std::vector<cdouble> line(nf), line_hat(nf);
    const double cell = dtau * g.dxi();        // d tau d xi
    const double tscale = dt / two_pi;
    for (int j = 0; j < m; ++j) {
        const double xi = g.wavenumber(j);
        const double xi3 = xi * xi * xi;
        for (size_t n = 0; n < nf; ++n) line[n] = spec[n][j];
        fft::dft(line, line_hat, -1);
        for (size_t idx = 0; idx < nf; ++idx) {
            const long ms = idx < nf / 2 ? static_cast<long>(idx)
                                         : static_cast<long>(idx) - static_cast<long>(nf);
            const double tau = dtau * static_cast<double>(ms);
            const double dist = std::abs(tau - xi3);
            int shell = lowest_shell;
            if (dist >= std::pow(2.0, lowest_shell))
                shell = static_cast<int>(std::floor(std::log2(dist)));
            const double mag2 = std::norm(line_hat[idx] * tscale);
            shell_mass2[shell] += mag2 * cell;
        }
    }

    double norm_acc = 0.0, norm_max = 0.0;
    if (profile) {
        profile->shell_index.clear();
        profile->shell_mass.clear();
        profile->merged_below = lowest_shell;
        profile->tau_max = dtau * static_cast<double>(nf / 2);
    }
    for (const auto& [k, mass2] : shell_mass2) {
        const double mass = two_pi * std::sqrt(mass2);  // L^2_{t,x} units
        if (profile) {
            profile->shell_index.push_back(k);
            profile->shell_mass.push_back(mass);
        }
        const double weighted = std::pow(2.0, b * k) * mass;
        if (q_dyadic == kInf)
            norm_max = std::max(norm_max, weighted);
        else
            norm_acc += std::pow(weighted, q_dyadic);
    }
    return q_dyadic == kInf ? norm_max : std::pow(norm_acc, 1.0 / q_dyadic);
}

double kato_weighted_integral(const Trace& tr, const ModulationPath& path, double sigma,
                              bool with_derivative) {
    validate_trace(tr);
    const auto [first, last] = frame_range(tr, tr.times.front(), tr.times.back());
    const std::vector<double> tw = time_weights(tr, first, last);
    const Grid& g = tr.grid();
    double acc = 0.0;
    for (size_t i = first; i <= last; ++i) {
        const double xc = path.x_at(tr.times[i]);
        const Field p = to_physical(tr.fields[i]);
        Field px;
        if (with_derivative) px = to_physical(derivative(tr.fields[i], 1));
        double frame_acc = 0.0;
        for (int j = 0; j < g.mode_count; ++j) {
            const double weight = std::exp(-sigma * std::abs(wrap(g.point(j) - xc, g.box_length)));
            double val = std::norm(p.values[j]);
            if (with_derivative) val += std::norm(px.values[j]);
            frame_acc += weight * val;
        }
        acc += tw[i - first] * frame_acc * g.dx();
    }
    return acc;
}

Report kato_identity_monitor(const Trace& tr, const ModulationPath& path, double psi_scale) {
    validate_trace(tr);
    if (tr.frames() < 3) throw WindowTooShort("kato_identity_monitor: needs >= 3 frames");
    const Grid& g = tr.grid();
    const double a = psi_scale;

    const size_t nf = tr.frames();
    std::vector<double> weighted_mass(nf), dissipation(nf);
    for (size_t i = 0; i < nf; ++i) {
        const double xc = path.x_at(tr.times[i]);
        const Field p = to_physical(tr.fields[i]);
        const Field px = to_physical(derivative(tr.fields[i], 1));
        double im = 0.0, dis = 0.0;
        for (int j = 0; j < g.mode_count; ++j) {
            const double z = wrap(g.point(j) - xc, g.box_length) / a;
            const double th = std::tanh(z);
            const double sech2 = 1.0 - th * th;
            const double psi = th;
            const double psi1 = sech2 / a;
            const double psi3 = (4.0 * sech2 * th * th - 2.0 * sech2 * sech2) / (a * a * a);
            const double u2 = std::norm(p.values[j]);
            const double ux2 = std::norm(px.values[j]);
            im += psi * u2;
            dis += (psi1 - psi3) * u2 + 3.0 * psi1 * ux2;
        }
        weighted_mass[i] = im * g.dx();
        dissipation[i] = dis * g.dx();
    }

    double max_res = 0.0, sum_abs_res = 0.0;
    for (size_t i = 1; i + 1 < nf; ++i) {
        const double ddt =
            (weighted_mass[i + 1] - weighted_mass[i - 1]) / (tr.times[i + 1] - tr.times[i - 1]);
        const double res = ddt + dissipation[i];
        max_res = std::max(max_res, std::abs(res));
        sum_abs_res += std::abs(res) * 0.5 * (tr.times[i + 1] - tr.times[i - 1]);
    }
    const double span = tr.times[nf - 2] - tr.times[1];
    double max_increase = 0.0;
    for (size_t i = 1; i < nf; ++i)
        max_increase = std::max(max_increase, weighted_mass[i] - weighted_mass[i - 1]);

    Report r;
    r.title = "kato_identity_monitor";
    r.add("max_frame_residual", max_res, "centered-difference identity residual");
    r.add("mean_abs_residual_per_unit_time", span > 0.0 ? sum_abs_res / span : 0.0,
          "time-averaged |residual|");
    r.add("max_weighted_mass_increase", max_increase,
          "monotonicity defect of int tanh((x-x(t))/scale) u^2");
    r.add("psi_scale", a, "weight parameter");
    return r;
}

double bilinear_functional(const Trace& u, const Trace& v, Window w) {
    validate_trace(u);
    validate_trace(v);
    if (!(u.grid() == v.grid())) throw ConfigInvalid("bilinear_functional: grid mismatch");
    const auto [first, last] = frame_range(u, w.t0, w.t1);
    const auto [vfirst, vlast] = frame_range(v, w.t0, w.t1);
    if (vfirst != first || vlast != last)
        throw ConfigInvalid("bilinear_functional: traces sample different windows");
    const Grid& g = u.grid();
    const int keep = g.dealias_keep;
    const std::vector<double> tw = time_weights(u, first, last);

    // gather band coefficients by signed mode index
    auto band = [&](const Field& f) {
        const Field s = to_spectral(f);
        std::vector<cdouble> c(static_cast<size_t>(2 * keep + 1));
        for (int j = 0; j < g.mode_count; ++j) {
            const int k = g.signed_index(j);
            if (k >= -keep && k <= keep) c[static_cast<size_t>(k + keep)] = s.values[j];
        }
        return c;
    };

    double acc = 0.0;
    std::vector<cdouble> out(static_cast<size_t>(4 * keep + 1));
    for (size_t i = first; i <= last; ++i) {
        const std::vector<cdouble> a = band(u.fields[i]);
        const std::vector<cdouble> bq = band(v.fields[i]);
        std::fill(out.begin(), out.end(), cdouble{0.0, 0.0});
        for (int k1 = -keep; k1 <= keep; ++k1) {
            const cdouble a1 = a[static_cast<size_t>(k1 + keep)];
            if (a1 == cdouble{0.0, 0.0}) continue;
            const double xi1 = k1 * g.dxi();
            for (int k2 = -keep; k2 <= keep; ++k2) {
                const cdouble b2 = bq[static_cast<size_t>(k2 + keep)];
                if (b2 == cdouble{0.0, 0.0}) continue;
                const double xi2 = k2 * g.dxi();
                const double mw =
                    std::sqrt(std::abs(xi1 + xi2)) * std::sqrt(std::abs(xi1 - xi2));
                out[static_cast<size_t>(k1 + k2 + 2 * keep)] += mw * a1 * b2;
            }
        }
        // (fg)^ carries one dxi from the coefficient-density convention
        double frame2 = 0.0;
        for (const auto& c : out) frame2 += std::norm(c);
        frame2 *= g.dxi() * g.dxi();          // |dxi * conv|^2
        acc += tw[i - first] * frame2 * two_pi * g.dxi();
    }
    return std::sqrt(acc);
}

double quartilinear_functional(const std::array<const Trace*, 4>& u, Window w) {
    for (const Trace* t : u) {
        validate_trace(*t);
        const double rms = l2_norm(t->fields.front()) / std::sqrt(t->grid().box_length);
        if (std::abs(mean_value(t->fields.front())) > 1e-12 * std::max(rms, 1e-300))
            throw NegativeOrderOnNonzeroMean("quartilinear_functional: inputs must be zero-mean");
    }
    const auto [first, last] = frame_range(*u[0], w.t0, w.t1);
    const std::vector<double> tw = time_weights(*u[0], first, last);
    double acc = 0.0;
    for (size_t i = first; i <= last; ++i) {
        const Field p1 = riesz_project(u[0]->fields[i], FrequencySign::positive);
        const Field p2 = riesz_project(u[1]->fields[i], FrequencySign::positive);
        const Field p3 = riesz_project(u[2]->fields[i], FrequencySign::negative);
        const Field p4 = riesz_project(u[3]->fields[i], FrequencySign::negative);
        const Field prod = exact_product4(p1, p2, p3, p4);
        acc += tw[i - first] * sobolev_norm(prod, 0.5, true);
    }
    return acc;
}

std::vector<EstimateSample> strichartz_constant_sampler(const StrichartzEnsembleSpec& spec) {
    std::vector<EstimateSample> out;
    if (spec.ensemble_size <= 0) return out;
    if (spec.band_min < 1 || spec.band_max < spec.band_min ||
        spec.band_max > spec.grid.dealias_keep)
        throw ConfigInvalid("strichartz_constant_sampler: bad band");
    if (spec.frames < 2) throw ConfigInvalid("strichartz_constant_sampler: needs >= 2 frames");

    Rng rng(spec.seed);
    const Grid& g = spec.grid;
    for (int s = 0; s < spec.ensemble_size; ++s) {
        Field u0 = make_field(g, Representation::spectral, true);
        for (int k = spec.band_min; k <= spec.band_max; ++k) {
            const cdouble c{rng.normal(), rng.normal()};
            // conjugate-symmetric placement -> real field, zero-mean by band
            u0.values[static_cast<size_t>(k)] = c;
            u0.values[static_cast<size_t>(g.mode_count - k)] = std::conj(c);
        }
        const double l2 = l2_norm(u0);
        if (l2 == 0.0) continue;
        Trace tr;
        const double dt = spec.t_span / (spec.frames - 1);
        for (int n = 0; n < spec.frames; ++n)
            append_frame(tr, n * dt, to_physical(airy_propagate(u0, n * dt)));

        const Window w{0.0, spec.t_span};
        const std::string tag = "sample_" + std::to_string(s);
        const double l4linf = spacetime_norm(tr, 4.0, kInf, w);
        const double l6 = spacetime_norm(tr, 6.0, 6.0, w);
        const double linf2 = spacetime_norm(tr, kInf, 2.0, w);
        const double l8 = spacetime_norm(tr, 8.0, 8.0, w);
        const double l6inf = spacetime_norm(tr, 6.0, kInf, w);
        const double hm14 = sobolev_norm(u0, -0.25, true);
        const double hm16 = sobolev_norm(u0, -1.0 / 6.0, true);
        out.push_back({"L4t_Linfx_vs_Hdot-1/4", tag, l4linf, hm14, l4linf / hm14});
        out.push_back({"L6tx_vs_Hdot-1/6", tag, l6, hm16, l6 / hm16});
        out.push_back({"LinftL2x_vs_L2", tag, linf2, l2, linf2 / l2});
        out.push_back({"L8tx_vs_L2", tag, l8, l2, l8 / l2});
        out.push_back({"L6tLinfx_vs_L2", tag, l6inf, l2, l6inf / l2});
    }
    return out;
}

}  // namespace gkdv
