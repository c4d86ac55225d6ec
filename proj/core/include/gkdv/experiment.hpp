#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkdv/report.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

enum class Scenario { soliton, airy_ensemble, perturbed_soliton, sweep };

struct PerturbationSpec {
    double epsilon = 0.01;
    int band_min = 8;            // excited mode range of the noise
    int band_max = 24;
    double envelope_width2 = 25.0;  // exp(-x^2 / width2) envelope
};

struct CheckpointSpec {
    double first = 1.5;
    double ratio = 1.5;
};

struct NormOptions {
    double lp_base = 2.0;        // 1.001 reproduces the paper's ladder
    double kato_sigma = 1.0;
    double psi_scale = 100.0;
};

struct EnsembleOptions {
    int size = 32;
    int band_min = 2;
    int band_max = 12;
    double t_span = 2.0;
    int frames = 65;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::soliton;
    std::uint64_t seed = 1;
    std::string output_dir;  // usually supplied by the CLI --out
    Grid grid = Grid{100.0, 1024, 511};
    SolverConfig solver;
    PerturbationSpec perturbation;
    std::vector<double> sweep_epsilons;
    CheckpointSpec checkpoints;
    NormOptions norms;
    EnsembleOptions ensemble;
};

// Schema-validated parse; throws ConfigInvalid on any unknown key, missing
// required field, or out-of-range value, before any compute happens.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical (sorted-key, round-trip double) JSON dump.
std::string config_hash(const ExperimentConfig& cfg);

struct RunManifest {
    std::string format;
    std::string version;
    std::string hash;
    std::string status;  // complete | failed
    std::string failure;
    double wall_clock_seconds = 0.0;
    double trusted_horizon = 0.0;
    nlohmann::json config;
    nlohmann::json conserved;
    std::vector<Report> reports;
    std::vector<std::string> children;

    nlohmann::json to_json() const;
};

// Canonical dump with the wall-clock field removed; two runs of one config
// and seed must agree bit-for-bit on this string.
std::string manifest_fingerprint(const nlohmann::json& manifest);

// Executes the configured scenario pipeline, persists trace snapshots,
// modulation CSV, norm report JSON, scattering diagnostics and the manifest
// (written atomically; failures still produce a manifest with the failure
// point recorded before the exception propagates).
RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Writes one tabular (CSV) file for a named quantity of a completed run.
// Known quantities: lambda_path, x_path, conserved, cauchy_distances,
// xsb_shells, strichartz_ratios.  Throws UnknownQuantity otherwise.
void emit_plot_data(const std::filesystem::path& run_dir, const std::string& quantity,
                    const std::filesystem::path& out_file);

// The seeded standard perturbation: envelope-windowed band-limited noise,
// projected to zero mean and normalised to unit H^1.
Field standard_perturbation(const Grid& grid, const PerturbationSpec& spec, std::uint64_t seed);

}  // namespace gkdv
