// Command-line front end for the quartic gKdV simulation laboratory.
//
// Subcommands: simulate, soliton-check, norms, scatter, sweep, verify,
// emit-plot-data.  Every subcommand accepts --config <path> and --out <dir>.
// Exit codes: 0 success, 1 configuration/validation error, 2 runtime failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gkdv/errors.hpp"
#include "gkdv/experiment.hpp"
#include "gkdv/report.hpp"
#include "gkdv/soliton.hpp"
#include "gkdv/verify.hpp"
#include "gkdv/version.hpp"

namespace fs = std::filesystem;

namespace {

gkdv::ExperimentConfig config_or_default(const std::string& config_path,
                                         gkdv::Scenario fallback) {
    if (!config_path.empty()) return gkdv::load_config(config_path);
    gkdv::ExperimentConfig cfg;
    cfg.scenario = fallback;
    return cfg;
}

fs::path resolve_out(const std::string& out_flag, const gkdv::ExperimentConfig& cfg,
                     const char* def) {
    if (!out_flag.empty()) return out_flag;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    return def;
}

int run_scenario(const std::string& config_path, const std::string& out_flag,
                 std::optional<gkdv::Scenario> force, const char* default_dir) {
    gkdv::ExperimentConfig cfg =
        config_or_default(config_path, force.value_or(gkdv::Scenario::soliton));
    if (force && cfg.scenario != *force) {
        std::cerr << "note: overriding configured scenario for this subcommand\n";
        cfg.scenario = *force;
    }
    const fs::path out = resolve_out(out_flag, cfg, default_dir);
    const gkdv::RunManifest mf = gkdv::run_experiment(cfg, out);
    std::cout << "run complete: " << (out / "manifest.json").string() << "\n";
    for (const auto& r : mf.reports)
        for (const auto& e : r.entries)
            std::cout << "  " << r.title << "." << e.name << " = " << e.value << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gkdv: pseudo-spectral laboratory for the quartic generalised KdV equation"};
    app.set_version_flag("--version", gkdv::kVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir, quantity, run_dir, level = "quick";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--out", out_dir, "output directory");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run the configured scenario");
    add_common(simulate);

    CLI::App* soliton_check =
        app.add_subcommand("soliton-check", "soliton profile and identity report");
    add_common(soliton_check);

    CLI::App* norms = app.add_subcommand(
        "norms", "free-flow norm toolbox: Strichartz ensembles, shell profiles, Kato monitor");
    add_common(norms);

    CLI::App* scatter =
        app.add_subcommand("scatter", "perturbed-soliton modulation and scattering run");
    add_common(scatter);

    CLI::App* sweep = app.add_subcommand("sweep", "epsilon sweep with scaling aggregate");
    add_common(sweep);

    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify);
    verify->add_option("--level", level, "quick|full")->check(CLI::IsMember({"quick", "full"}));

    CLI::App* emit = app.add_subcommand("emit-plot-data", "export a run quantity as CSV");
    add_common(emit);
    emit->add_option("--run", run_dir, "completed run directory")->required();
    emit->add_option("--quantity", quantity, "lambda_path|x_path|conserved|cauchy_distances|xsb_shells|strichartz_ratios")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            if (config_path.empty()) throw gkdv::ConfigInvalid("simulate requires --config");
            return run_scenario(config_path, out_dir, std::nullopt, "run");
        }
        if (soliton_check->parsed()) {
            gkdv::ExperimentConfig cfg =
                config_or_default(config_path, gkdv::Scenario::soliton);
            const fs::path out = resolve_out(out_dir, cfg, "soliton-check");
            fs::create_directories(out);
            const gkdv::Report identities = gkdv::soliton_identities(cfg.grid);
            std::ofstream os(out / "soliton_identities.json");
            os << gkdv::to_json(identities).dump(2) << "\n";
            for (const auto& e : identities.entries)
                std::cout << e.name << " = " << e.value
                          << (e.provenance.empty() ? "" : "   [" + e.provenance + "]") << "\n";
            return 0;
        }
        if (norms->parsed())
            return run_scenario(config_path, out_dir, gkdv::Scenario::airy_ensemble, "norms-run");
        if (scatter->parsed())
            return run_scenario(config_path, out_dir, gkdv::Scenario::perturbed_soliton,
                                "scatter-run");
        if (sweep->parsed())
            return run_scenario(config_path, out_dir, gkdv::Scenario::sweep, "sweep-run");
        if (verify->parsed()) {
            gkdv::ExperimentConfig cfg =
                config_or_default(config_path, gkdv::Scenario::soliton);
            const fs::path out = resolve_out(out_dir, cfg, "verify-run");
            const auto results = gkdv::run_verification(
                level == "full" ? gkdv::VerifyLevel::full : gkdv::VerifyLevel::quick, out);
            std::cout << gkdv::format_verification(results);
            std::ofstream os(out / "verification.json");
            os << gkdv::to_json(gkdv::verification_report(results)).dump(2) << "\n";
            for (const auto& r : results)
                if (!r.passed) return 2;
            return 0;
        }
        if (emit->parsed()) {
            const fs::path out = out_dir.empty() ? fs::path{quantity + ".csv"}
                                                 : fs::path{out_dir} / (quantity + ".csv");
            if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
            gkdv::emit_plot_data(run_dir, quantity, out);
            std::cout << "wrote " << out.string() << "\n";
            return 0;
        }
    } catch (const gkdv::ConfigInvalid& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
