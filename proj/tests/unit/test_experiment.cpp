#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gkdv/errors.hpp"
#include "gkdv/experiment.hpp"
#include "gkdv/norms.hpp"

using namespace gkdv;
namespace fs = std::filesystem;

namespace {
fs::path scratch() {
    const fs::path p = fs::temp_directory_path() / "gkdv_experiment_tests";
    fs::create_directories(p);
    return p;
}
}  // namespace

TEST_CASE("config parsing is strict about keys and values") {
    nlohmann::json j;
    j["scenario"] = "soliton";
    CHECK_NOTHROW(parse_config(j));

    j["banana"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigInvalid);
    j.erase("banana");

    j["grid"] = {{"box_length", 100.0}, {"mode_count", 1023}};
    CHECK_THROWS_AS(parse_config(j), ConfigInvalid);  // odd M rejected before compute
    j["grid"]["mode_count"] = 512;
    CHECK_NOTHROW(parse_config(j));

    j["solver"] = {{"dt", -1.0}};
    CHECK_THROWS_AS(parse_config(j), ConfigInvalid);
    j["solver"] = {{"scheme", "leapfrog"}};
    CHECK_THROWS_AS(parse_config(j), ConfigInvalid);

    nlohmann::json bad;
    CHECK_THROWS_AS(parse_config(bad), ConfigInvalid);  // scenario required
}

TEST_CASE("config hash is stable and location-independent") {
    ExperimentConfig a;
    a.scenario = Scenario::soliton;
    a.seed = 7;
    ExperimentConfig b = a;
    b.output_dir = "somewhere/else";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 8;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("standard perturbation is zero-mean unit-H1 and deterministic") {
    const Grid g = make_grid(100.0, 512);
    PerturbationSpec spec;
    spec.band_min = 4;
    spec.band_max = 12;
    const Field p1 = standard_perturbation(g, spec, 99);
    const Field p2 = standard_perturbation(g, spec, 99);
    for (size_t j = 0; j < p1.values.size(); ++j) REQUIRE(p1.values[j] == p2.values[j]);
    CHECK(std::abs(mean_value(p1)) < 1e-14);
    CHECK(sobolev_norm(p1, 1.0, false) == doctest::Approx(1.0).epsilon(1e-12));
    const Field p3 = standard_perturbation(g, spec, 100);
    CHECK(l2_distance(p1, p3) > 1e-3);
}

TEST_CASE("soliton experiment writes trace, csv and manifest") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::soliton;
    cfg.grid = make_grid(100.0, 512);
    cfg.solver.dt = 4e-3;
    cfg.solver.t_end = 1.0;
    cfg.solver.snapshot_stride = 50;
    cfg.solver.frame_speed = 1.0;

    const fs::path out = scratch() / "soliton_run";
    fs::remove_all(out);
    const RunManifest mf = run_experiment(cfg, out);

    CHECK(mf.status == "complete");
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "modulation.csv"));
    CHECK(fs::exists(out / "trace" / "manifest.json"));
    CHECK(fs::exists(out / "trace" / "snapshot_000000.fld"));

    bool found = false;
    for (const auto& r : mf.reports)
        if (r.title == "soliton_transport") {
            found = true;
            CHECK(r.value("relative_l2_error") < 1e-6);
            CHECK(r.value("mass_drift_rel") < 1e-10);
        }
    CHECK(found);
}

TEST_CASE("invalid config fails before compute with exit-code semantics") {
    nlohmann::json j;
    j["scenario"] = "sweep";
    j["sweep_epsilons"] = {0.01};  // needs at least two
    const ExperimentConfig cfg = parse_config(j);
    const fs::path out = scratch() / "bad_sweep";
    fs::remove_all(out);
    CHECK_THROWS_AS(run_experiment(cfg, out), ConfigInvalid);
    // failure manifest still written
    CHECK(fs::exists(out / "manifest.json"));
    std::ifstream is(out / "manifest.json");
    const nlohmann::json mf = nlohmann::json::parse(is);
    CHECK(mf.at("status") == "failed");
}

TEST_CASE("emit_plot_data quantities and unknown-id rejection") {
    const fs::path out = scratch() / "soliton_run";  // produced above
    REQUIRE(fs::exists(out / "modulation.csv"));

    const fs::path lam = scratch() / "lambda.csv";
    emit_plot_data(out, "lambda_path", lam);
    std::ifstream is(lam);
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,lambda");

    const fs::path cons = scratch() / "conserved.csv";
    emit_plot_data(out, "conserved", cons);
    std::ifstream is2(cons);
    std::getline(is2, header);
    CHECK(header == "t,mass,energy");

    CHECK_THROWS_AS(emit_plot_data(out, "no_such_thing", scratch() / "x.csv"),
                    UnknownQuantity);
}

TEST_CASE("manifest fingerprint drops wall clock only") {
    nlohmann::json a = {{"x", 1}, {"wall_clock_seconds", 1.23}};
    nlohmann::json b = {{"x", 1}, {"wall_clock_seconds", 9.87}};
    CHECK(manifest_fingerprint(a) == manifest_fingerprint(b));
    b["x"] = 2;
    CHECK(manifest_fingerprint(a) != manifest_fingerprint(b));
}
