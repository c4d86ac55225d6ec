#include "gkdv/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gkdv/dealias.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/projections.hpp"
#include "gkdv/rng.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/soliton.hpp"
#include "gkdv/version.hpp"

namespace gkdv {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
    if (!j.is_object()) throw ConfigInvalid("config: " + where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigInvalid("config: unknown key '" + key + "' in " + where);
    }
}

Scenario parse_scenario(const std::string& s) {
    if (s == "soliton") return Scenario::soliton;
    if (s == "airy_ensemble") return Scenario::airy_ensemble;
    if (s == "perturbed_soliton") return Scenario::perturbed_soliton;
    if (s == "sweep") return Scenario::sweep;
    throw ConfigInvalid("config: unknown scenario '" + s + "'");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::soliton: return "soliton";
        case Scenario::airy_ensemble: return "airy_ensemble";
        case Scenario::perturbed_soliton: return "perturbed_soliton";
        case Scenario::sweep: return "sweep";
    }
    return "?";
}

TimeScheme parse_scheme(const std::string& s) {
    if (s == "etdrk4") return TimeScheme::etdrk4;
    if (s == "lawson_ifrk4") return TimeScheme::lawson_ifrk4;
    throw ConfigInvalid("config: unknown scheme '" + s + "'");
}

std::string scheme_name(TimeScheme s) {
    return s == TimeScheme::etdrk4 ? "etdrk4" : "lawson_ifrk4";
}

void atomic_write(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        os << text;
        if (!os) throw RuntimeFailure("atomic_write: failed for " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

json norm_record(const std::string& kind, json params, double t0, double t1, double value,
                 const Grid& g, double base) {
    json r;
    r["kind"] = kind;
    r["params"] = std::move(params);
    r["window"] = {t0, t1};
    r["value"] = value;
    r["grid"] = {{"box_length", g.box_length}, {"mode_count", g.mode_count}};
    r["base"] = base;
    return r;
}

Trace restrict_trace(const Trace& tr, double t0, double t1) {
    const auto [first, last] = frame_range(tr, t0, t1);
    Trace out;
    for (size_t i = first; i <= last; ++i) append_frame(out, tr.times[i], tr.fields[i]);
    return out;
}

ModulationPath restrict_path(const ModulationPath& p, double t0, double t1) {
    ModulationPath out;
    for (size_t i = 0; i < p.times.size(); ++i) {
        if (p.times[i] < t0 - 1e-12 || p.times[i] > t1 + 1e-12) continue;
        out.times.push_back(p.times[i]);
        out.lambda.push_back(p.lambda[i]);
        out.x.push_back(p.x[i]);
        out.lambda_prime.push_back(p.lambda_prime[i]);
        out.x_prime.push_back(p.x_prime[i]);
        out.fit_residual.push_back(p.fit_residual[i]);
    }
    return out;
}

double weighted_mass_frame(const Field& f, double center, double sigma) {
    const Field p = to_physical(f);
    const Grid& g = p.grid;
    double acc = 0.0;
    for (int j = 0; j < g.mode_count; ++j) {
        const double d = std::remainder(g.point(j) - center, g.box_length);
        acc += std::exp(-sigma * std::abs(d)) * std::norm(p.values[j]);
    }
    return acc * g.dx();
}

struct ScenarioOutput {
    std::vector<Report> reports;
    json conserved;
    double trusted_horizon = 0.0;
    std::vector<std::string> children;
};

// ---------------------------------------------------------------- soliton

ScenarioOutput run_soliton(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    ScenarioOutput so;
    const Field u0 = q_profile(cfg.grid);
    RunState st = evolve(u0, cfg.solver);

    const double t_end = st.time;
    const Field exact = scaled_soliton(cfg.grid, SolitonParams{1.0, t_end});
    const double rel_err = l2_distance(st.u, exact) / l2_norm(exact);

    double mass_drift = 0.0, energy_drift = 0.0;
    for (size_t i = 0; i < st.mass_history.size(); ++i) {
        mass_drift = std::max(mass_drift, std::abs(st.mass_history[i] - st.mass_history[0]) /
                                              std::abs(st.mass_history[0]));
        energy_drift =
            std::max(energy_drift, std::abs(st.energy_history[i] - st.energy_history[0]) /
                                       std::abs(st.energy_history[0]));
    }

    Decomposition dec = decompose_trace(st.trace, 0.0);
    double center_drift = 0.0, lambda_dev = 0.0;
    for (size_t i = 0; i < dec.path.times.size(); ++i) {
        center_drift = std::max(
            center_drift, std::abs(dec.path.x[i] - dec.path.x[0] - dec.path.times[i]));
        lambda_dev = std::max(lambda_dev, std::abs(dec.path.lambda[i] - 1.0));
    }

    Report r;
    r.title = "soliton_transport";
    r.add("relative_l2_error", rel_err, "vs exact translate Q(x - t)");
    r.add("mass_drift_rel", mass_drift, "max over snapshots");
    r.add("energy_drift_rel", energy_drift, "max over snapshots");
    r.add("fitted_center_drift", center_drift, "max |x(t) - t - x(0)|");
    r.add("fitted_lambda_deviation", lambda_dev, "max |lambda - 1|");
    r.add("t_end", t_end, "");
    so.reports.push_back(std::move(r));

    so.trusted_horizon = wrap_horizon(u0);
    so.conserved = {{"times", st.trace.times},
                    {"mass", st.mass_history},
                    {"energy", st.energy_history}};
    TraceManifest tm{config_hash(cfg), st.trace.times, st.mass_history, st.energy_history};
    save_trace(out / "trace", st.trace, tm);
    write_modulation_csv(out / "modulation.csv", dec.path);
    return so;
}

// ---------------------------------------------------------- perturbed run

ScenarioOutput run_perturbed(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    ScenarioOutput so;
    const double eps = cfg.perturbation.epsilon;
    if (!(eps > 0.0)) throw ConfigInvalid("perturbed_soliton: epsilon must be positive");

    const Field q = q_profile(cfg.grid);
    const Field p = standard_perturbation(cfg.grid, cfg.perturbation, cfg.seed);
    const Field u0 = add(q, scale(p, eps));

    const double t_wrap = wrap_horizon(u0);
    const double trusted = std::min(t_wrap, cfg.solver.t_end);
    so.trusted_horizon = trusted;

    RunState st = evolve(u0, cfg.solver);
    Decomposition dec = decompose_trace(st.trace, eps);

    const Trace w_tr = restrict_trace(dec.w, 0.0, trusted);
    const ModulationPath path_tr = restrict_path(dec.path, 0.0, trusted);

    // --- modulation-era diagnostics
    double sup_h1 = 0.0;
    for (const auto& f : w_tr.fields) sup_h1 = std::max(sup_h1, sobolev_norm(f, 1.0, false));
    const double wox = kato_weighted_integral(w_tr, dec.path, 1.0, true);

    double rate_constant = 0.0, min_rhs = kInf;
    for (size_t i = 1; i + 1 < path_tr.times.size(); ++i) {
        const double lhs = std::abs(path_tr.lambda_prime[i]) +
                           std::pow(std::abs(path_tr.x_prime[i] -
                                             1.0 / (path_tr.lambda[i] * path_tr.lambda[i])),
                                    2.0);
        const double rhs = weighted_mass_frame(w_tr.fields[i], path_tr.x[i], 0.5);
        if (rhs > 0.0) rate_constant = std::max(rate_constant, lhs / rhs);
        min_rhs = std::min(min_rhs, rhs);
    }

    // --- forcing term diagnostics: int int |E|^2 e^{|x - x(t)|}
    double forcing_weighted = 0.0;
    {
        const auto [first, last] = frame_range(dec.w, 0.0, trusted);
        for (size_t i = first; i <= last; ++i) {
            const Field e = forcing_term(dec, i);
            const Grid& g = e.grid;
            double frame_acc = 0.0;
            const Field ep = to_physical(e);
            for (int j = 0; j < g.mode_count; ++j) {
                const double d =
                    std::remainder(g.point(j) - dec.path.x[i], g.box_length);
                frame_acc += std::exp(std::abs(d)) * std::norm(ep.values[j]);
            }
            double wt = 0.0;
            if (i > first) wt += 0.5 * (dec.w.times[i] - dec.w.times[i - 1]);
            if (i < last) wt += 0.5 * (dec.w.times[i + 1] - dec.w.times[i]);
            forcing_weighted += wt * frame_acc * g.dx();
        }
    }

    Report mod;
    mod.title = "modulation_suite";
    mod.add("epsilon", eps, "");
    mod.add("sup_w_h1", sup_h1, "sup over trusted frames");
    mod.add("sup_w_h1_over_eps", sup_h1 / eps, "recorded constant");
    mod.add("wox_weighted_integral", wox, "int int (w^2 + w_x^2) e^{-|x-x(t)|}");
    mod.add("wox_over_eps2", wox / (eps * eps), "recorded constant");
    mod.add("modulation_rate_constant", rate_constant,
            "max over frames of (|lambda'| + |x' - lambda^-2|^2) / int w^2 e^{-|x-x(t)|/2}");
    mod.add("modulation_rate_min_rhs", min_rhs, "weighted mass floor along the path");
    mod.add("forcing_weighted_l2", forcing_weighted, "int int |E|^2 e^{|x-x(t)|}");
    mod.add("forcing_over_eps2", forcing_weighted / (eps * eps), "recorded constant");
    mod.add("max_fit_residual", *std::max_element(path_tr.fit_residual.begin(),
                                                  path_tr.fit_residual.end()),
            "weighted LSQ objective");
    so.reports.push_back(std::move(mod));

    // --- scattering diagnostics
    const std::vector<double> cps =
        geometric_checkpoints(cfg.checkpoints.first, cfg.checkpoints.ratio, trusted);
    ScatterDiagnostics sd = pullback_cauchy_distances(w_tr, cps, trusted);
    const size_t last_cp_frame = [&] {
        size_t best = 0;
        for (size_t i = 0; i < w_tr.frames(); ++i)
            if (w_tr.times[i] <= sd.checkpoints.back() + 1e-12) best = i;
        return best;
    }();
    const Field w_plus = pullback_state(w_tr.fields[last_cp_frame], w_tr.times[last_cp_frame]);

    std::vector<double> sc_dist;
    for (double t : sd.checkpoints) sc_dist.push_back(scattering_distance(w_tr, w_plus, t));

    // Duhamel-route cross-check over [0, T_last] with its quadrature budget
    const Window dwin{0.0, sd.checkpoints.back()};
    const Field w_plus_duhamel = duhamel_accumulate(dec, dwin);
    const double route_gap =
        sobolev_norm(sub(w_plus_duhamel, to_physical(w_plus)), 1.0, false);
    double budget = 0.0;
    {
        // trapezoid error estimate from second differences of the pullback
        // integrand g(t) = airy(-t)[E - (w^4)_x]
        const auto [first, last] = frame_range(dec.w, dwin.t0, dwin.t1);
        std::vector<Field> gs;
        for (size_t i = first; i <= last; ++i) {
            Field e = forcing_term(dec, i);
            Field w4x = derivative(dealiased_power(dec.w.fields[i], 4), 1);
            gs.push_back(airy_propagate(to_spectral(sub(e, w4x)), -dec.w.times[i]));
        }
        const double h = dec.w.times[first + 1] - dec.w.times[first];
        double max_g2 = 0.0;
        for (size_t i = 1; i + 1 < gs.size(); ++i) {
            Field second = add(gs[i - 1], gs[i + 1]);
            second = sub(second, scale(gs[i], 2.0));
            max_g2 = std::max(max_g2, sobolev_norm(second, 1.0, false) / (h * h));
        }
        budget = (dwin.t1 - dwin.t0) * h * h / 12.0 * max_g2;
        // solver error allowance at the snapshot cadence
        budget += 1e-9;
    }

    Report sc;
    sc.title = "scattering_suite";
    sc.add("trusted_horizon", trusted, "L / (2 v_max) wrap estimate");
    sc.add("checkpoint_count", static_cast<double>(sd.checkpoints.size()), "");
    for (size_t i = 0; i < sd.h1_distance.size(); ++i) {
        sc.add("cauchy_h1_" + std::to_string(i), sd.h1_distance[i],
               "||W(T_{i+1}) - W(T_i)||_{H^1}");
        sc.add("cauchy_hneg16_" + std::to_string(i), sd.hneg16_distance[i],
               "same in homogeneous H^{-1/6}");
    }
    for (size_t i = 0; i < sc_dist.size(); ++i)
        sc.add("scatter_distance_" + std::to_string(i), sc_dist[i],
               "||w(T_i) - airy(w_plus, T_i)||_{H^1 + Hdot^-1/6}");
    sc.add("duhamel_pullback_gap_h1", route_gap, "two w_plus routes compared in H^1");
    sc.add("duhamel_error_budget", budget, "trapezoid second-difference estimate");
    so.reports.push_back(std::move(sc));

    const double lambda_final = path_tr.lambda.back();
    Report dc = decoupling_check(u0, lambda_final, w_plus);
    dc.add("epsilon", eps, "");
    so.reports.push_back(std::move(dc));

    // --- persistence
    so.conserved = {{"times", st.trace.times},
                    {"mass", st.mass_history},
                    {"energy", st.energy_history}};
    TraceManifest tm{config_hash(cfg), st.trace.times, st.mass_history, st.energy_history};
    save_trace(out / "trace", st.trace, tm);
    write_modulation_csv(out / "modulation.csv", dec.path);
    write_distances_csv(out / "distances.csv", sd);

    json norm_reports = json::array();
    norm_reports.push_back(norm_record("weighted_kato", {{"sigma", 1.0}}, 0.0, trusted, wox,
                                       cfg.grid, cfg.norms.lp_base));
    norm_reports.push_back(norm_record("sobolev_inhom", {{"s", 1.0}}, 0.0, trusted, sup_h1,
                                       cfg.grid, cfg.norms.lp_base));
    atomic_write(out / "norm_reports.json", norm_reports.dump(2) + "\n");
    return so;
}

// ------------------------------------------------------------- ensembles

ScenarioOutput run_airy_ensemble(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out) {
    ScenarioOutput so;
    StrichartzEnsembleSpec spec;
    spec.grid = cfg.grid;
    spec.ensemble_size = cfg.ensemble.size;
    spec.seed = cfg.seed;
    spec.band_min = cfg.ensemble.band_min;
    spec.band_max = cfg.ensemble.band_max;
    spec.t_span = cfg.ensemble.t_span;
    spec.frames = cfg.ensemble.frames;
    const std::vector<EstimateSample> samples = strichartz_constant_sampler(spec);

    {
        std::ofstream os(out / "strichartz_ratios.csv");
        os << "functional,input,numerator,denominator,ratio\n" << std::setprecision(17);
        for (const auto& s : samples)
            os << s.functional << ',' << s.input << ',' << s.numerator << ','
               << s.denominator << ',' << s.ratio << '\n';
    }

    Report r;
    r.title = "strichartz_ensemble";
    for (const char* fn : {"L4t_Linfx_vs_Hdot-1/4", "L6tx_vs_Hdot-1/6", "LinftL2x_vs_L2",
                           "L8tx_vs_L2", "L6tLinfx_vs_L2"}) {
        double lo = kInf, hi = 0.0;
        int n = 0;
        for (const auto& s : samples) {
            if (s.functional != fn) continue;
            lo = std::min(lo, s.ratio);
            hi = std::max(hi, s.ratio);
            ++n;
        }
        if (n == 0) continue;
        r.add(std::string(fn) + "_min", lo, "ensemble");
        r.add(std::string(fn) + "_max", hi, "ensemble");
    }
    r.add("ensemble_size", static_cast<double>(cfg.ensemble.size), "");
    so.reports.push_back(std::move(r));

    // xsb shell profile of one free wave from the same band
    {
        Rng rng(cfg.seed + 1);
        Field u0 = make_field(cfg.grid, Representation::spectral, true);
        for (int k = spec.band_min; k <= spec.band_max; ++k) {
            const cdouble c{rng.normal(), rng.normal()};
            u0.values[static_cast<size_t>(k)] = c;
            u0.values[static_cast<size_t>(cfg.grid.mode_count - k)] = std::conj(c);
        }
        const int frames = std::max(128, cfg.ensemble.frames);
        const double dt = cfg.ensemble.t_span / (frames - 1);
        Trace tr;
        for (int n = 0; n < frames; ++n)
            append_frame(tr, n * dt, to_physical(airy_propagate(u0, n * dt)));
        XsbShellProfile prof;
        const double xsb = xsb_norm(tr, 0.5, kInf, Window{0.0, cfg.ensemble.t_span}, &prof);

        std::ofstream os(out / "xsb_shells.csv");
        os << "k,mass\n" << std::setprecision(17);
        for (size_t i = 0; i < prof.shell_index.size(); ++i)
            os << prof.shell_index[i] << ',' << prof.shell_mass[i] << '\n';

        Report x;
        x.title = "xsb_free_wave";
        x.add("xsb_b_half_qinf", xsb, "free-wave dyadic-modulation norm");
        x.add("shell_count", static_cast<double>(prof.shell_index.size()), "");
        x.add("merged_below_shell", static_cast<double>(prof.merged_below),
              "tau resolution floor");
        so.reports.push_back(std::move(x));

        ModulationPath unit_path;
        for (size_t i = 0; i < tr.frames(); ++i) {
            unit_path.times.push_back(tr.times[i]);
            unit_path.x.push_back(tr.times[i]);
            unit_path.lambda.push_back(1.0);
            unit_path.lambda_prime.push_back(0.0);
            unit_path.x_prime.push_back(1.0);
            unit_path.fit_residual.push_back(0.0);
        }
        so.reports.push_back(kato_identity_monitor(tr, unit_path, cfg.norms.psi_scale));
    }

    so.trusted_horizon = cfg.ensemble.t_span;
    so.conserved = json::object();
    return so;
}

// ------------------------------------------------------------------ sweep

ScenarioOutput run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    ScenarioOutput so;
    if (cfg.sweep_epsilons.size() < 2)
        throw ConfigInvalid("sweep: needs at least two epsilons");

    std::vector<double> eps_list = cfg.sweep_epsilons;
    std::vector<json> child_manifests;
    for (size_t i = 0; i < eps_list.size(); ++i) {
        ExperimentConfig child = cfg;
        child.scenario = Scenario::perturbed_soliton;
        child.perturbation.epsilon = eps_list[i];
        child.sweep_epsilons.clear();
        std::ostringstream dir;
        dir << "eps_" << i;
        const std::filesystem::path child_dir = out / dir.str();
        RunManifest mf = run_experiment(child, child_dir);
        child_manifests.push_back(mf.to_json());
        so.children.push_back(dir.str());
    }

    auto collect = [&](const std::string& report, const std::string& entry) {
        std::vector<double> vals;
        for (const auto& cm : child_manifests) {
            for (const auto& rep : cm.at("reports")) {
                if (rep.at("title") != report) continue;
                for (const auto& e : rep.at("entries"))
                    if (e.at("name") == entry) vals.push_back(e.at("value").get<double>());
            }
        }
        return vals;
    };

    auto fit_slope = [&](const std::vector<double>& vals, Report& r, const std::string& tag) {
        if (vals.size() != eps_list.size()) return;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto n = static_cast<double>(vals.size());
        for (size_t i = 0; i < vals.size(); ++i) {
            const double x = std::log(eps_list[i]);
            const double y = std::log(std::max(vals[i], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / n;
        double ss = 0.0;
        for (size_t i = 0; i < vals.size(); ++i) {
            const double y = std::log(std::max(vals[i], 1e-300));
            const double f = slope * std::log(eps_list[i]) + intercept;
            ss += (y - f) * (y - f);
        }
        r.add(tag + "_scaling_exponent", slope, "log-log least squares across the sweep");
        r.add(tag + "_lsq_residual", ss, "sum of squared log residuals");
    };

    Report agg;
    agg.title = "sweep_aggregate";
    for (size_t i = 0; i < eps_list.size(); ++i)
        agg.add("epsilon_" + std::to_string(i), eps_list[i], "");
    fit_slope(collect("modulation_suite", "wox_weighted_integral"), agg, "wox");
    fit_slope(collect("modulation_suite", "sup_w_h1"), agg, "sup_w_h1");
    fit_slope(collect("modulation_suite", "forcing_weighted_l2"), agg, "forcing");
    {
        // pairwise wox ratio vs eps^2 scaling, the acceptance-facing check
        const std::vector<double> wox = collect("modulation_suite", "wox_weighted_integral");
        if (wox.size() == eps_list.size()) {
            for (size_t i = 0; i + 1 < wox.size(); ++i) {
                const double expected = (eps_list[i + 1] * eps_list[i + 1]) /
                                        (eps_list[i] * eps_list[i]);
                agg.add("wox_ratio_vs_eps2_" + std::to_string(i),
                        (wox[i + 1] / wox[i]) / expected,
                        "value ratio divided by eps^2 ratio");
            }
        }
    }
    {
        const std::vector<double> final_h1 = collect("scattering_suite", "cauchy_h1_0");
        fit_slope(final_h1, agg, "first_cauchy_h1");
    }
    so.reports.push_back(std::move(agg));
    so.conserved = json::object();
    return so;
}

}  // namespace

// ----------------------------------------------------------- public API

Field standard_perturbation(const Grid& grid, const PerturbationSpec& spec,
                            std::uint64_t seed) {
    if (spec.band_min < 1 || spec.band_max < spec.band_min ||
        spec.band_max > grid.dealias_keep)
        throw ConfigInvalid("perturbation: bad band");
    Rng rng(seed);
    std::vector<double> amp, phase;
    for (int k = spec.band_min; k <= spec.band_max; ++k) {
        amp.push_back(rng.normal());
        phase.push_back(2.0 * std::numbers::pi * rng.uniform());
    }
    Field p = make_field(grid, Representation::physical, true);
    for (int j = 0; j < grid.mode_count; ++j) {
        const double x = grid.point(j);
        double v = 0.0;
        for (int k = spec.band_min; k <= spec.band_max; ++k) {
            const double xi = grid.dxi() * k;
            v += amp[static_cast<size_t>(k - spec.band_min)] *
                 std::cos(xi * x + phase[static_cast<size_t>(k - spec.band_min)]);
        }
        p.values[j] = std::exp(-x * x / spec.envelope_width2) * v;
    }
    // zero mean, then unit H^1
    Field s = to_spectral(p);
    s.values[0] = 0.0;
    p = to_physical(s);
    const double h1 = sobolev_norm(p, 1.0, false);
    if (!(h1 > 0.0)) throw ConfigInvalid("perturbation: degenerate draw");
    return scale(p, 1.0 / h1);
}

ExperimentConfig parse_config(const json& j) {
    require_keys(j, {"scenario", "seed", "output_dir", "grid", "solver", "perturbation",
                     "sweep_epsilons", "checkpoints", "norms", "ensemble"},
                 "top level");
    ExperimentConfig cfg;
    if (!j.contains("scenario")) throw ConfigInvalid("config: scenario is required");
    cfg.scenario = parse_scenario(j.at("scenario").get<std::string>());
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.output_dir = j.value("output_dir", std::string{});

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        require_keys(g, {"box_length", "mode_count", "dealias_keep"}, "grid");
        cfg.grid = make_grid(g.value("box_length", 100.0), g.value("mode_count", 1024),
                             g.value("dealias_keep", -1));
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        require_keys(s,
                     {"dt", "t_end", "nonlinearity_power", "nonlinearity_enabled", "sponge",
                      "snapshot_stride", "scheme", "frame_speed", "cfl_constant",
                      "blowup_ceiling_factor"},
                     "solver");
        cfg.solver.dt = s.value("dt", 1e-3);
        cfg.solver.t_end = s.value("t_end", 1.0);
        cfg.solver.nonlinearity_power = s.value("nonlinearity_power", 4);
        cfg.solver.nonlinearity_enabled = s.value("nonlinearity_enabled", true);
        cfg.solver.snapshot_stride = s.value("snapshot_stride", 1);
        cfg.solver.scheme = parse_scheme(s.value("scheme", std::string{"etdrk4"}));
        cfg.solver.frame_speed = s.value("frame_speed", 0.0);
        cfg.solver.cfl_constant = s.value("cfl_constant", 0.5);
        cfg.solver.blowup_ceiling_factor = s.value("blowup_ceiling_factor", 1e6);
        if (s.contains("sponge") && !s.at("sponge").is_null()) {
            const json& sp = s.at("sponge");
            require_keys(sp, {"width", "strength"}, "solver.sponge");
            cfg.solver.sponge = SpongeConfig{sp.value("width", 10.0), sp.value("strength", 1.0)};
        }
        if (!(cfg.solver.dt > 0.0)) throw ConfigInvalid("config: solver.dt must be positive");
        if (cfg.solver.snapshot_stride < 1)
            throw ConfigInvalid("config: snapshot_stride must be >= 1");
    }
    if (j.contains("perturbation")) {
        const json& p = j.at("perturbation");
        require_keys(p, {"epsilon", "band_min", "band_max", "envelope_width2"}, "perturbation");
        cfg.perturbation.epsilon = p.value("epsilon", 0.01);
        cfg.perturbation.band_min = p.value("band_min", 8);
        cfg.perturbation.band_max = p.value("band_max", 24);
        cfg.perturbation.envelope_width2 = p.value("envelope_width2", 25.0);
    }
    if (j.contains("sweep_epsilons"))
        cfg.sweep_epsilons = j.at("sweep_epsilons").get<std::vector<double>>();
    if (j.contains("checkpoints")) {
        const json& c = j.at("checkpoints");
        require_keys(c, {"first", "ratio"}, "checkpoints");
        cfg.checkpoints.first = c.value("first", 1.5);
        cfg.checkpoints.ratio = c.value("ratio", 1.5);
    }
    if (j.contains("norms")) {
        const json& n = j.at("norms");
        require_keys(n, {"lp_base", "kato_sigma", "psi_scale"}, "norms");
        cfg.norms.lp_base = n.value("lp_base", 2.0);
        cfg.norms.kato_sigma = n.value("kato_sigma", 1.0);
        cfg.norms.psi_scale = n.value("psi_scale", 100.0);
    }
    if (j.contains("ensemble")) {
        const json& e = j.at("ensemble");
        require_keys(e, {"size", "band_min", "band_max", "t_span", "frames"}, "ensemble");
        cfg.ensemble.size = e.value("size", 32);
        cfg.ensemble.band_min = e.value("band_min", 2);
        cfg.ensemble.band_max = e.value("band_max", 12);
        cfg.ensemble.t_span = e.value("t_span", 2.0);
        cfg.ensemble.frames = e.value("frames", 65);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigInvalid("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigInvalid(std::string{"config parse error: "} + e.what());
    }
    return parse_config(j);
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["scenario"] = scenario_name(cfg.scenario);
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    j["grid"] = {{"box_length", cfg.grid.box_length},
                 {"mode_count", cfg.grid.mode_count},
                 {"dealias_keep", cfg.grid.dealias_keep}};
    j["solver"] = {{"dt", cfg.solver.dt},
                   {"t_end", cfg.solver.t_end},
                   {"nonlinearity_power", cfg.solver.nonlinearity_power},
                   {"nonlinearity_enabled", cfg.solver.nonlinearity_enabled},
                   {"snapshot_stride", cfg.solver.snapshot_stride},
                   {"scheme", scheme_name(cfg.solver.scheme)},
                   {"frame_speed", cfg.solver.frame_speed},
                   {"cfl_constant", cfg.solver.cfl_constant},
                   {"blowup_ceiling_factor", cfg.solver.blowup_ceiling_factor}};
    if (cfg.solver.sponge)
        j["solver"]["sponge"] = {{"width", cfg.solver.sponge->width},
                                 {"strength", cfg.solver.sponge->strength}};
    else
        j["solver"]["sponge"] = nullptr;
    j["perturbation"] = {{"epsilon", cfg.perturbation.epsilon},
                         {"band_min", cfg.perturbation.band_min},
                         {"band_max", cfg.perturbation.band_max},
                         {"envelope_width2", cfg.perturbation.envelope_width2}};
    j["sweep_epsilons"] = cfg.sweep_epsilons;
    j["checkpoints"] = {{"first", cfg.checkpoints.first}, {"ratio", cfg.checkpoints.ratio}};
    j["norms"] = {{"lp_base", cfg.norms.lp_base},
                  {"kato_sigma", cfg.norms.kato_sigma},
                  {"psi_scale", cfg.norms.psi_scale}};
    j["ensemble"] = {{"size", cfg.ensemble.size},
                     {"band_min", cfg.ensemble.band_min},
                     {"band_max", cfg.ensemble.band_max},
                     {"t_span", cfg.ensemble.t_span},
                     {"frames", cfg.ensemble.frames}};
    return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
    json j = config_to_json(cfg);
    j.erase("output_dir");  // location must not change identity
    const std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << "fnv1a:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

json RunManifest::to_json() const {
    json j;
    j["format"] = format;
    j["version"] = version;
    j["config_hash"] = hash;
    j["status"] = status;
    if (!failure.empty()) j["failure"] = failure;
    j["wall_clock_seconds"] = wall_clock_seconds;
    j["trusted_horizon"] = trusted_horizon;
    j["config"] = config;
    j["conserved"] = conserved;
    j["reports"] = json::array();
    for (const auto& r : reports) j["reports"].push_back(gkdv::to_json(r));
    j["children"] = children;
    return j;
}

std::string manifest_fingerprint(const json& manifest) {
    json j = manifest;
    j.erase("wall_clock_seconds");
    return j.dump();
}

RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    RunManifest mf;
    mf.format = kManifestFormat;
    mf.version = kVersion;
    mf.hash = config_hash(cfg);
    mf.config = config_to_json(cfg);
    mf.status = "complete";

    try {
        ScenarioOutput so;
        switch (cfg.scenario) {
            case Scenario::soliton: so = run_soliton(cfg, out_dir); break;
            case Scenario::perturbed_soliton: so = run_perturbed(cfg, out_dir); break;
            case Scenario::airy_ensemble: so = run_airy_ensemble(cfg, out_dir); break;
            case Scenario::sweep: so = run_sweep(cfg, out_dir); break;
        }
        mf.reports = std::move(so.reports);
        mf.conserved = std::move(so.conserved);
        mf.trusted_horizon = so.trusted_horizon;
        mf.children = std::move(so.children);
    } catch (const std::exception& e) {
        mf.status = "failed";
        mf.failure = e.what();
        mf.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        atomic_write(out_dir / "manifest.json", mf.to_json().dump(2) + "\n");
        throw;
    }

    mf.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    atomic_write(out_dir / "manifest.json", mf.to_json().dump(2) + "\n");
    return mf;
}

void emit_plot_data(const std::filesystem::path& run_dir, const std::string& quantity,
                    const std::filesystem::path& out_file) {
    auto copy_columns = [&](const std::filesystem::path& src, int col_a, int col_b,
                            const std::string& header) {
        std::ifstream is(src);
        if (!is) throw UnknownQuantity("emit_plot_data: missing artifact " + src.string());
        std::ofstream os(out_file);
        os << header << "\n";
        std::string line;
        std::getline(is, line);  // skip source header
        while (std::getline(is, line)) {
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (col_a < static_cast<int>(cells.size()) && col_b < static_cast<int>(cells.size()))
                os << cells[static_cast<size_t>(col_a)] << ','
                   << cells[static_cast<size_t>(col_b)] << '\n';
        }
    };

    if (quantity == "lambda_path") {
        copy_columns(run_dir / "modulation.csv", 0, 1, "t,lambda");
    } else if (quantity == "x_path") {
        copy_columns(run_dir / "modulation.csv", 0, 2, "t,x");
    } else if (quantity == "xsb_shells") {
        copy_columns(run_dir / "xsb_shells.csv", 0, 1, "k,mass");
    } else if (quantity == "cauchy_distances") {
        std::ifstream is(run_dir / "distances.csv");
        if (!is) throw UnknownQuantity("emit_plot_data: run has no distances.csv");
        std::ofstream os(out_file);
        os << is.rdbuf();
    } else if (quantity == "strichartz_ratios") {
        std::ifstream is(run_dir / "strichartz_ratios.csv");
        if (!is) throw UnknownQuantity("emit_plot_data: run has no strichartz_ratios.csv");
        std::ofstream os(out_file);
        os << is.rdbuf();
    } else if (quantity == "conserved") {
        std::ifstream is(run_dir / "manifest.json");
        if (!is) throw UnknownQuantity("emit_plot_data: missing manifest");
        const json mf = json::parse(is);
        if (!mf.contains("conserved") || !mf.at("conserved").contains("times"))
            throw UnknownQuantity("emit_plot_data: run recorded no conserved history");
        const auto& c = mf.at("conserved");
        std::ofstream os(out_file);
        os << "t,mass,energy\n" << std::setprecision(17);
        const auto& ts = c.at("times");
        const auto& ms = c.at("mass");
        const auto& es = c.at("energy");
        for (size_t i = 0; i < ts.size(); ++i)
            os << ts[i].get<double>() << ',' << ms[i].get<double>() << ','
               << es[i].get<double>() << '\n';
    } else {
        throw UnknownQuantity("emit_plot_data: unknown quantity '" + quantity + "'");
    }
}

}  // namespace gkdv
