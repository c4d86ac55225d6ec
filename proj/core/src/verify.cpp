#include "gkdv/verify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gkdv/dealias.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/experiment.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/projections.hpp"
#include "gkdv/rng.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/soliton.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Gate {
    CriterionResult* r;

    void le(const std::string& metric, double value, double bound, bool info = false) {
        CriterionCheck c{metric, value, "<=", 0.0, bound, value <= bound, info};
        if (!info && !c.passed) r->passed = false;
        r->checks.push_back(std::move(c));
    }
    void ge(const std::string& metric, double value, double bound, bool info = false) {
        CriterionCheck c{metric, value, ">=", bound, 0.0, value >= bound, info};
        if (!info && !c.passed) r->passed = false;
        r->checks.push_back(std::move(c));
    }
    void in(const std::string& metric, double value, double lo, double hi, bool info = false) {
        CriterionCheck c{metric, value, "in", lo, hi, value >= lo && value <= hi, info};
        if (!info && !c.passed) r->passed = false;
        r->checks.push_back(std::move(c));
    }
    void note(const std::string& metric, double value) {
        r->checks.push_back({metric, value, "recorded", 0.0, 0.0, true, true});
    }
};

template <typename F>
CriterionResult timed(int id, const std::string& name, F&& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    Gate g{&r};
    try {
        body(g);
    } catch (const std::exception& e) {
        r.passed = false;
        r.checks.push_back({std::string("exception: ") + e.what(), 0.0, "", 0, 0, false, false});
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Field random_band_field(const Grid& g, int band_min, int band_max, Rng& rng) {
    Field u0 = make_field(g, Representation::spectral, true);
    for (int k = band_min; k <= band_max; ++k) {
        const cdouble c{rng.normal(), rng.normal()};
        u0.values[static_cast<size_t>(k)] = c;
        u0.values[static_cast<size_t>(g.mode_count - k)] = std::conj(c);
    }
    return u0;
}

Trace airy_trace(const Field& u0, double t_span, int frames) {
    Trace tr;
    const double dt = t_span / (frames - 1);
    for (int n = 0; n < frames; ++n)
        append_frame(tr, n * dt, to_physical(airy_propagate(u0, n * dt)));
    return tr;
}

// ---------------------------------------------------------------- criteria

CriterionResult c1_soliton_ode_residual() {
    return timed(1, "soliton-ode-residual", [](Gate& g) {
        const Grid grid = make_grid(60.0, 4096);
        const Field q = q_profile(grid);
        const Field qxx = derivative(q, 2);
        double res = 0.0;
        for (int j = 0; j < grid.mode_count; ++j) {
            const double v = q.values[j].real();
            res = std::max(res,
                           std::abs(qxx.values[j].real() + v * v * v * v - v));
        }
        g.le("max|Q'' + Q^4 - Q| (spectral, M=4096, L=60)", res, 1e-8);
    });
}

CriterionResult c2_pohozaev() {
    return timed(2, "pohozaev-ratios", [](Gate& g) {
        const Grid grid = make_grid(60.0, 4096);
        const Report r = soliton_identities(grid);
        g.le("|int Q'^2 / int Q^2 - 3/7|",
             std::abs(r.value("ratio_Qprime2_Q2") - 3.0 / 7.0), 1e-8);
        g.le("|int Q^5 / int Q^2 - 10/7|",
             std::abs(r.value("ratio_Q5_Q2") - 10.0 / 7.0), 1e-8);
        g.le("first-integral pointwise residual", r.value("first_integral_max_residual"),
             1e-10);
        g.note("E[Q]/int Q^2 (oracle; -1/14 = -0.0714285..)", r.value("ratio_energy_Q2"));
        g.le("|E[Q]/int Q^2 + 1/14| (oracle agreement)",
             std::abs(r.value("ratio_energy_Q2") + 1.0 / 14.0), 1e-10);
        g.note("printed +1/10 coefficient minus oracle (unconfirmed constant)",
               0.1 - r.value("ratio_energy_Q2"));
    });
}

CriterionResult c3_airy_exactness() {
    return timed(3, "airy-propagator-exactness", [](Gate& g) {
        const Grid grid = make_grid(50.0, 256);
        const double t = 0.37;
        // single mode phase
        Field mode = make_field(grid, Representation::spectral, false);
        const int k = 5;
        mode.values[k] = {1.0, 0.0};
        const double xi = grid.dxi() * k;
        const Field prop = airy_propagate(mode, t);
        const cdouble expected = std::exp(cdouble{0.0, t * xi * xi * xi});
        g.le("single-mode phase error", std::abs(prop.values[k] - expected), 1e-12);

        Rng rng(7);
        const Field u0 = random_band_field(grid, 1, 100, rng);
        const Field ut = airy_propagate(u0, 2.31);
        g.le("L2 preservation", std::abs(l2_norm(ut) - l2_norm(u0)) / l2_norm(u0), 1e-13);
        const Field back = airy_propagate(ut, -2.31);
        g.le("time-reversal round trip", l2_distance(back, u0) / l2_norm(u0), 1e-12);
    });
}

CriterionResult c4_soliton_transport() {
    return timed(4, "soliton-transport", [](Gate& g) {
        // production settings: soliton-adapted integrating frame
        const Grid grid = make_grid(100.0, 1024);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 10.0;
        cfg.snapshot_stride = 200;
        cfg.scheme = TimeScheme::etdrk4;
        cfg.frame_speed = 1.0;
        const Field u0 = q_profile(grid);
        RunState st = evolve(u0, cfg);
        const Field exact = scaled_soliton(grid, SolitonParams{1.0, 10.0});
        g.le("relative L2 error vs Q(x-t) at t=10 (dt=1e-3)",
             l2_distance(st.u, exact) / l2_norm(exact), 1e-6);
        double mass_drift = 0.0, energy_drift = 0.0;
        for (size_t i = 0; i < st.mass_history.size(); ++i) {
            mass_drift = std::max(mass_drift,
                                  std::abs(st.mass_history[i] - st.mass_history[0]) /
                                      std::abs(st.mass_history[0]));
            energy_drift = std::max(energy_drift,
                                    std::abs(st.energy_history[i] - st.energy_history[0]) /
                                        std::abs(st.energy_history[0]));
        }
        g.le("mass drift (relative)", mass_drift, 1e-10);
        g.le("energy drift (relative)", energy_drift, 1e-8);

        // dt-convergence of the Lawson stepper in the lab frame, where the
        // dt^4 error is visible above the roundoff floor
        auto lab_error = [&](double dt) {
            SolverConfig c2;
            c2.dt = dt;
            c2.t_end = 10.0;
            c2.snapshot_stride = static_cast<int>(std::lround(10.0 / dt));
            c2.scheme = TimeScheme::lawson_ifrk4;
            c2.frame_speed = 0.0;
            RunState s = evolve(u0, c2);
            return l2_distance(s.u, exact) / l2_norm(exact);
        };
        const double e_coarse = lab_error(4e-4);
        const double e_fine = lab_error(2e-4);
        g.note("lab-frame error(dt=4e-4)", e_coarse);
        g.note("lab-frame error(dt=2e-4)", e_fine);
        g.in("fourth-order ratio error(dt)/error(dt/2)", e_coarse / e_fine, 14.0, 18.0);
    });
}

CriterionResult c5_scaling_covariance() {
    return timed(5, "scaling-covariance", [](Gate& g) {
        const double lambda = 1.25;
        const double t1 = 5.0, dt1 = 1e-3;
        const Grid g1 = make_grid(100.0, 1024);
        const Grid g2 = make_grid(100.0 * lambda, 1024);

        // mildly perturbed soliton so the comparison sees genuine nonlinear
        // dynamics, not just the invariant profile
        PerturbationSpec ps;
        ps.epsilon = 0.05;
        ps.band_min = 4;
        ps.band_max = 16;
        const Field p1 = standard_perturbation(g1, ps, 11);
        const Field u01 = add(q_profile(g1), scale(p1, 0.05));

        Field u02 = make_field(g2, Representation::physical, true);
        const double amp = std::pow(lambda, -2.0 / 3.0);
        for (int j = 0; j < g2.mode_count; ++j)
            u02.values[j] = amp * u01.values[j];  // x'_j = lambda x_j on matched grids

        SolverConfig c1;
        c1.dt = dt1;
        c1.t_end = t1;
        c1.snapshot_stride = static_cast<int>(std::lround(t1 / dt1));
        SolverConfig c2 = c1;
        c2.dt = dt1 * lambda * lambda * lambda;
        c2.t_end = t1 * lambda * lambda * lambda;
        c2.snapshot_stride = c1.snapshot_stride;

        RunState s1 = evolve(u01, c1);
        RunState s2 = evolve(u02, c2);

        double num = 0.0, den = 0.0;
        for (int j = 0; j < g1.mode_count; ++j) {
            const double expect = amp * s1.u.values[j].real();
            num += std::norm(s2.u.values[j] - expect);
            den += expect * expect;
        }
        g.le("two-scale relative L2 discrepancy (lambda=1.25)",
             std::sqrt(num / den), 1e-6);
    });
}

CriterionResult c6_dealias_oracle() {
    return timed(6, "dealias-quartic-oracle", [](Gate& g) {
        const Grid grid = make_grid(10.0, 64);
        const int band = 7;
        Rng rng(13);
        Field f = random_band_field(grid, 1, band, rng);
        f.values[0] = {0.3, 0.0};

        const Field fast = dealiased_power(f, 4);

        // brute-force discrete convolution of the coefficient densities:
        // (u^4)^_m = dxi^3 sum_{k1+k2+k3+k4=m} c_{k1} c_{k2} c_{k3} c_{k4}
        auto coef = [&](int k) -> cdouble {
            if (k < -band || k > band) return {0.0, 0.0};
            return f.values[static_cast<size_t>(k >= 0 ? k : k + grid.mode_count)];
        };
        const double dxi = grid.dxi();
        double worst = 0.0;
        for (int m = -grid.dealias_keep; m <= grid.dealias_keep; ++m) {
            cdouble acc{0.0, 0.0};
            for (int k1 = -band; k1 <= band; ++k1)
                for (int k2 = -band; k2 <= band; ++k2)
                    for (int k3 = -band; k3 <= band; ++k3)
                        acc += coef(k1) * coef(k2) * coef(k3) * coef(m - k1 - k2 - k3);
            acc *= dxi * dxi * dxi;
            const cdouble got =
                fast.values[static_cast<size_t>(m >= 0 ? m : m + grid.mode_count)];
            worst = std::max(worst, std::abs(got - acc));
        }
        g.le("max coefficient error vs O(K^4) convolution", worst, 1e-10);
    });
}

CriterionResult c7_kato_identity() {
    return timed(7, "kato-identity-monitor", [](Gate& g) {
        const Grid grid = make_grid(80.0, 512);
        Rng rng(23);
        Field u0 = random_band_field(grid, 2, 24, rng);
        u0 = scale(u0, 1.0 / l2_norm(u0));

        auto monitor = [&](int frames) {
            const double t_span = 2.0;
            Trace tr = airy_trace(u0, t_span, frames);
            ModulationPath path;
            for (size_t i = 0; i < tr.frames(); ++i) {
                path.times.push_back(tr.times[i]);
                path.x.push_back(tr.times[i]);
                path.lambda.push_back(1.0);
                path.lambda_prime.push_back(0.0);
                path.x_prime.push_back(1.0);
                path.fit_residual.push_back(0.0);
            }
            return kato_identity_monitor(tr, path, 100.0);
        };
        const Report coarse = monitor(201);   // dt = 0.01
        const Report fine = monitor(401);     // dt = 0.005
        const double res_c = coarse.value("mean_abs_residual_per_unit_time");
        const double res_f = fine.value("mean_abs_residual_per_unit_time");
        g.le("Airy-flow residual per unit time (dt=0.01)", res_c, 1e-6);
        g.in("refinement ratio (expect ~4, second order)", res_c / res_f, 3.0, 5.0);
        g.le("weighted-mass monotonicity defect", fine.value("max_weighted_mass_increase"),
             1e-9);
    });
}

struct PerturbedRuns {
    std::filesystem::path dir;
    nlohmann::json sweep_manifest;        // children 0.005 / 0.01 / 0.02
    nlohmann::json run_001;               // the eps = 0.01 child
};

ExperimentConfig perturbed_base_config() {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::sweep;
    cfg.seed = 42;
    cfg.grid = make_grid(100.0, 1024);
    cfg.solver.dt = 2e-3;
    cfg.solver.t_end = 7.0;
    cfg.solver.snapshot_stride = 25;  // frame spacing 0.05
    cfg.solver.scheme = TimeScheme::etdrk4;
    cfg.solver.frame_speed = 1.0;
    cfg.perturbation.band_min = 8;
    cfg.perturbation.band_max = 24;
    cfg.perturbation.envelope_width2 = 25.0;
    cfg.sweep_epsilons = {0.005, 0.01, 0.02};
    cfg.checkpoints.first = 1.5;
    cfg.checkpoints.ratio = 1.5;
    return cfg;
}

const PerturbedRuns& perturbed_runs(const std::filesystem::path& scratch) {
    static PerturbedRuns runs = [&] {
        PerturbedRuns r;
        r.dir = scratch / "sweep";
        const RunManifest mf = run_experiment(perturbed_base_config(), r.dir);
        r.sweep_manifest = mf.to_json();
        std::ifstream is(r.dir / "eps_1" / "manifest.json");
        r.run_001 = nlohmann::json::parse(is);
        return r;
    }();
    return runs;
}

double report_value(const nlohmann::json& manifest, const std::string& report,
                    const std::string& entry) {
    for (const auto& rep : manifest.at("reports")) {
        if (rep.at("title") != report) continue;
        for (const auto& e : rep.at("entries"))
            if (e.at("name") == entry) return e.at("value").get<double>();
    }
    throw UnknownQuantity("verification: missing " + report + "/" + entry);
}

CriterionResult c8_modulation_suite(const std::filesystem::path& scratch) {
    return timed(8, "modulation-suite", [&](Gate& g) {
        // exact-family recovery
        const Grid grid = make_grid(100.0, 1024);
        const Field member = scaled_soliton(grid, SolitonParams{1.1, 3.0});
        const SolitonParams fit =
            fit_parameters(member, SolitonParams{1.0, 2.5});
        g.le("fit recovery |lambda - 1.1|", std::abs(fit.lambda - 1.1), 1e-10);
        g.le("fit recovery |center - 3.0|", std::abs(fit.center - 3.0), 1e-10);

        const PerturbedRuns& runs = perturbed_runs(scratch);
        const nlohmann::json& run = runs.run_001;
        g.le("sup_t ||w||_H1 / eps (eps=0.01)",
             report_value(run, "modulation_suite", "sup_w_h1_over_eps"), 10.0);
        g.note("weighted decay int int (w^2+w_x^2) e^{-|x-x(t)|} / eps^2",
               report_value(run, "modulation_suite", "wox_over_eps2"));
        g.note("modulation-rate constant C (framewise, recorded)",
               report_value(run, "modulation_suite", "modulation_rate_constant"));
        g.ge("modulation-rate inequality: weighted-mass floor positive",
             report_value(run, "modulation_suite", "modulation_rate_min_rhs"), 0.0);
        g.note("forcing int int |E|^2 e^{|x-x(t)|} / eps^2",
               report_value(run, "modulation_suite", "forcing_over_eps2"));

        const nlohmann::json& sweep = runs.sweep_manifest;
        g.in("wox eps^2-scaling: ratio(0.005 -> 0.01) / 4",
             report_value(sweep, "sweep_aggregate", "wox_ratio_vs_eps2_0"), 0.5, 2.0);
        g.in("wox eps^2-scaling: ratio(0.01 -> 0.02) / 4",
             report_value(sweep, "sweep_aggregate", "wox_ratio_vs_eps2_1"), 0.5, 2.0);
        g.note("wox log-log scaling exponent",
               report_value(sweep, "sweep_aggregate", "wox_scaling_exponent"));
    });
}

CriterionResult c9_scattering(const std::filesystem::path& scratch) {
    return timed(9, "scattering-decrease", [&](Gate& g) {
        const PerturbedRuns& runs = perturbed_runs(scratch);
        const nlohmann::json& run = runs.run_001;

        std::vector<double> cauchy;
        for (int i = 0;; ++i) {
            try {
                cauchy.push_back(
                    report_value(run, "scattering_suite", "cauchy_h1_" + std::to_string(i)));
            } catch (const UnknownQuantity&) {
                break;
            }
        }
        g.ge("number of Cauchy gaps", static_cast<double>(cauchy.size()), 2.0);
        for (size_t i = 0; i + 1 < cauchy.size(); ++i)
            g.le("Cauchy decrease gap " + std::to_string(i + 1) + " / gap " + std::to_string(i),
                 cauchy[i + 1] / cauchy[i], 1.0);

        const double first_dist =
            report_value(run, "scattering_suite", "scatter_distance_0");
        std::vector<double> dists;
        for (int i = 0;; ++i) {
            try {
                dists.push_back(report_value(run, "scattering_suite",
                                             "scatter_distance_" + std::to_string(i)));
            } catch (const UnknownQuantity&) {
                break;
            }
        }
        // last checkpoint defines w_plus, so compare at the second-to-last
        const double final_dist = dists[dists.size() - 2];
        g.le("final H1+Hdot^-1/6 distance / first", final_dist / first_dist, 0.5);

        g.le("duhamel vs pullback w_plus gap (H1)",
             report_value(run, "scattering_suite", "duhamel_pullback_gap_h1"),
             report_value(run, "scattering_suite", "duhamel_error_budget"));
    });
}

CriterionResult c10_decoupling(const std::filesystem::path& scratch) {
    return timed(10, "decoupling-identities", [&](Gate& g) {
        // pure soliton at high temporal accuracy
        const Grid grid = make_grid(100.0, 1024);
        SolverConfig cfg;
        cfg.dt = 2e-4;
        cfg.t_end = 1.0;
        cfg.snapshot_stride = 250;
        cfg.frame_speed = 1.0;
        const Field u0 = q_profile(grid);
        RunState st = evolve(u0, cfg);
        Decomposition dec = decompose_trace(st.trace, 0.0);
        const size_t last = dec.w.frames() - 1;
        const Field w_plus =
            pullback_state(dec.w.fields[last], dec.w.times[last]);
        const Report pure = decoupling_check(u0, dec.path.lambda[last], w_plus);
        g.le("pure-soliton mass identity residual", std::abs(pure.value("mass_residual")),
             1e-8);

        const PerturbedRuns& runs = perturbed_runs(scratch);
        const nlohmann::json& run = runs.run_001;
        const double eps = 0.01;
        const double mass_res = std::abs(report_value(run, "decoupling_check", "mass_residual"));
        const double energy_res =
            std::abs(report_value(run, "decoupling_check", "energy_residual"));
        g.le("perturbed mass decoupling residual / eps^2", mass_res / (eps * eps), 10.0);
        g.le("perturbed energy decoupling residual / eps^2", energy_res / (eps * eps), 10.0);
        g.note("recorded truncation (cross term |2 int R w|)",
               report_value(run, "decoupling_check", "cross_term_bound"));
        g.note("energy residual with printed +1/10 coefficient (unconfirmed)",
               report_value(run, "decoupling_check", "energy_residual_printed_tenth"));
    });
}

CriterionResult c11_norm_toolbox() {
    return timed(11, "norm-toolbox", [](Gate& g) {
        const Grid grid = make_grid(60.0, 256);
        Rng rng(31);
        Field f = random_band_field(grid, 1, 60, rng);
        const double c = 2.718281828;

        // absolute homogeneity for every norm kind
        double worst = 0.0;
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
        worst = std::max(worst, rel(sobolev_norm(scale(f, c), 0.75, false),
                                    c * sobolev_norm(f, 0.75, false)));
        worst = std::max(worst, rel(sobolev_norm(scale(f, c), -1.0 / 6.0, true),
                                    c * sobolev_norm(f, -1.0 / 6.0, true)));
        Trace tr = airy_trace(to_physical(f), 1.0, 65);
        Trace trc;
        for (size_t i = 0; i < tr.frames(); ++i)
            append_frame(trc, tr.times[i], scale(tr.fields[i], c));
        const Window w{0.0, 1.0};
        worst = std::max(worst, rel(spacetime_norm(trc, 6.0, 6.0, w),
                                    c * spacetime_norm(tr, 6.0, 6.0, w)));
        worst = std::max(worst, rel(xsb_norm(trc, 0.5, 2.0, w), c * xsb_norm(tr, 0.5, 2.0, w)));
        ModulationPath path;
        for (size_t i = 0; i < tr.frames(); ++i) {
            path.times.push_back(tr.times[i]);
            path.x.push_back(tr.times[i]);
            path.lambda.push_back(1.0);
            path.lambda_prime.push_back(0.0);
            path.x_prime.push_back(1.0);
            path.fit_residual.push_back(0.0);
        }
        worst = std::max(worst, rel(kato_weighted_integral(trc, path, 1.0, true),
                                    c * c * kato_weighted_integral(tr, path, 1.0, true)));
        g.le("homogeneity defect across norm kinds", worst, 1e-12);

        // Fubini: L2_t L2_x equals the Parseval route
        double parseval = 0.0;
        {
            const auto [first, last] = frame_range(tr, 0.0, 1.0);
            for (size_t i = first; i <= last; ++i) {
                double wt = 0.0;
                if (i > first) wt += 0.5 * (tr.times[i] - tr.times[i - 1]);
                if (i < last) wt += 0.5 * (tr.times[i + 1] - tr.times[i]);
                const Field s = to_spectral(tr.fields[i]);
                double acc = 0.0;
                for (const auto& v : s.values) acc += std::norm(v);
                parseval += wt * acc * two_pi * grid.dxi();
            }
            parseval = std::sqrt(parseval);
        }
        g.le("L2_t L2_x vs Parseval route",
             rel(spacetime_norm(tr, 2.0, 2.0, w), parseval), 1e-10);

        // Littlewood-Paley partition of unity at both bases
        for (const double base : {2.0, 1.001}) {
            const std::vector<double> levels = lp_partition_levels(grid, base);
            Field sum = lp_lowpass(f, levels.front(), base);
            for (size_t i = 1; i < levels.size(); ++i)
                sum = add(sum, lp_project(f, levels[i], base));
            g.le("LP partition of unity defect (base " + std::to_string(base) + ")",
                 l2_distance(sum, f) / l2_norm(f), 1e-10);
        }

        // Bernstein ratio recorded at base 2
        {
            const double level = 32.0 * grid.dxi();
            const Field pn = lp_project(f, level, 2.0);
            const double linf = max_abs(pn);
            const double l2 = l2_norm(pn);
            if (l2 > 0.0)
                g.note("Bernstein L^inf / (N^{1/2} L^2) sample",
                       linf / (std::sqrt(level) * l2));
        }

        // xsb free-wave shell profile decays above the leakage floor
        {
            Rng r2(77);
            Field fw = random_band_field(grid, 2, 12, r2);
            Trace ftr = airy_trace(to_physical(fw), 4.0, 257);
            XsbShellProfile prof;
            xsb_norm(ftr, 0.5, kInf, Window{0.0, 4.0}, &prof);
            // find the peak shell, require decay until the floor
            size_t peak = 0;
            for (size_t i = 1; i < prof.shell_mass.size(); ++i)
                if (prof.shell_mass[i] > prof.shell_mass[peak]) peak = i;
            const double floor_level = 1e-5 * prof.shell_mass[peak];
            bool decays = true;
            for (size_t i = peak; i + 1 < prof.shell_mass.size(); ++i) {
                if (prof.shell_mass[i + 1] < floor_level || prof.shell_mass[i] < floor_level)
                    break;
                if (prof.shell_mass[i + 1] > prof.shell_mass[i]) decays = false;
            }
            g.ge("free-wave shell profile decays above leakage floor", decays ? 1.0 : 0.0, 1.0);
            g.note("free-wave peak shell index", static_cast<double>(prof.shell_index[peak]));
        }

        // bilinear functional: diagonal zero and ensemble stability
        {
            Field one_mode = make_field(grid, Representation::spectral, false);
            one_mode.values[9] = {1.0, 0.0};
            Trace t1 = airy_trace(one_mode, 1.0, 65);
            g.le("bilinear functional on equal single modes", bilinear_functional(t1, t1, w),
                 1e-14);

            Rng r3(101);
            std::vector<double> ratios;
            for (int pair = 0; pair < 100; ++pair) {
                const int c1 = 20 + static_cast<int>(r3.uniform() * 30.0);
                const int c2 = -50 + static_cast<int>(r3.uniform() * 20.0);
                Field ua = make_field(grid, Representation::spectral, false);
                Field vb = make_field(grid, Representation::spectral, false);
                for (int d = -4; d <= 4; ++d) {
                    ua.values[static_cast<size_t>(c1 + d)] = {r3.normal(), r3.normal()};
                    vb.values[static_cast<size_t>((c2 + d + grid.mode_count) % grid.mode_count)] =
                        {r3.normal(), r3.normal()};
                }
                Trace ta = airy_trace(ua, 4.0, 129);
                Trace tb = airy_trace(vb, 4.0, 129);
                ratios.push_back(bilinear_functional(ta, tb, Window{0.0, 4.0}) /
                                 (l2_norm(ua) * l2_norm(vb)));
            }
            double lo = kInf, hi = 0.0, mean = 0.0;
            for (double v : ratios) lo = std::min(lo, v), hi = std::max(hi, v), mean += v;
            mean /= static_cast<double>(ratios.size());
            g.in("bilinear free-wave ratio min/mean", lo / mean, 0.8, 1.25);
            g.in("bilinear free-wave ratio max/mean", hi / mean, 0.8, 1.25);
            g.note("bilinear free-wave mean ratio", mean);
        }

        // Strichartz sampler: unitarity ratio exactly 1, L6 spread bounded
        {
            StrichartzEnsembleSpec spec;
            spec.grid = grid;
            spec.ensemble_size = 200;
            spec.seed = 5;
            spec.band_min = 2;
            spec.band_max = 40;
            spec.t_span = 2.0;
            spec.frames = 65;
            const auto samples = strichartz_constant_sampler(spec);
            double unit_worst = 0.0, l6lo = kInf, l6hi = 0.0;
            for (const auto& s : samples) {
                if (s.functional == "LinftL2x_vs_L2")
                    unit_worst = std::max(unit_worst, std::abs(s.ratio - 1.0));
                if (s.functional == "L6tx_vs_Hdot-1/6") {
                    l6lo = std::min(l6lo, s.ratio);
                    l6hi = std::max(l6hi, s.ratio);
                }
            }
            g.le("L^inf_t L^2_x ratio deviation from 1", unit_worst, 1e-13);
            g.le("L6 ratio max/min over 200 samples", l6hi / l6lo, 10.0);
        }
    });
}

CriterionResult c12_determinism(const std::filesystem::path& scratch) {
    return timed(12, "determinism", [&](Gate& g) {
        ExperimentConfig cfg;
        cfg.scenario = Scenario::perturbed_soliton;
        cfg.seed = 1234;
        cfg.grid = make_grid(100.0, 512);
        cfg.solver.dt = 4e-3;
        cfg.solver.t_end = 4.0;
        cfg.solver.snapshot_stride = 25;
        cfg.solver.frame_speed = 1.0;
        cfg.perturbation.epsilon = 0.01;
        cfg.perturbation.band_min = 4;
        cfg.perturbation.band_max = 12;
        cfg.checkpoints.first = 1.0;
        cfg.checkpoints.ratio = 1.5;

        const RunManifest a = run_experiment(cfg, scratch / "det_a");
        const RunManifest b = run_experiment(cfg, scratch / "det_b");
        const bool same =
            manifest_fingerprint(a.to_json()) == manifest_fingerprint(b.to_json());
        g.ge("manifest fingerprints identical (wall clock excluded)", same ? 1.0 : 0.0, 1.0);
        g.ge("hashes agree", a.hash == b.hash ? 1.0 : 0.0, 1.0);
    });
}

}  // namespace

std::vector<CriterionResult> run_verification(VerifyLevel level,
                                              const std::filesystem::path& scratch) {
    std::filesystem::create_directories(scratch);
    std::vector<CriterionResult> out;
    out.push_back(c1_soliton_ode_residual());
    out.push_back(c2_pohozaev());
    out.push_back(c3_airy_exactness());
    if (level == VerifyLevel::full) {
        out.push_back(c4_soliton_transport());
        out.push_back(c5_scaling_covariance());
    }
    out.push_back(c6_dealias_oracle());
    out.push_back(c7_kato_identity());
    if (level == VerifyLevel::full) {
        out.push_back(c8_modulation_suite(scratch));
        out.push_back(c9_scattering(scratch));
        out.push_back(c10_decoupling(scratch));
    }
    out.push_back(c11_norm_toolbox());
    out.push_back(c12_determinism(scratch));
    return out;
}

Report verification_report(const std::vector<CriterionResult>& results) {
    Report r;
    r.title = "verification";
    for (const auto& c : results)
        r.add("criterion_" + std::to_string(c.id) + "_" + c.name, c.passed ? 1.0 : 0.0,
              c.name);
    return r;
}

std::string format_verification(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(3);
    bool all = true;
    for (const auto& c : results) {
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " ("
           << std::fixed << c.seconds << "s)" << std::scientific << "\n";
        for (const auto& chk : c.checks) {
            os << "    " << (chk.informational ? "  -  " : (chk.passed ? " ok  " : " BAD "))
               << chk.metric << " = " << chk.value;
            if (chk.relation == "<=")
                os << "  (<= " << chk.bound_hi << ")";
            else if (chk.relation == ">=")
                os << "  (>= " << chk.bound_lo << ")";
            else if (chk.relation == "in")
                os << "  (in [" << chk.bound_lo << ", " << chk.bound_hi << "])";
            os << "\n";
        }
        all = all && c.passed;
    }
    os << (all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
    return os.str();
}

}  // namespace gkdv
