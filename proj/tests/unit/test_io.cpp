#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "pairgen/run.hpp"

using namespace pairgen;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("pairgen_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char *kMinimal = R"({"field": {"e0_over_ecr": 0.1414213562373095, "tau_m": 100, "omega_m": 0.05, "delta": 0}})";

RunConfig small_config(double delta = 0.0) {
    RunConfig cfg = parse_config(kMinimal);
    cfg.field.delta = delta;
    cfg.grid = MomentumGrid::square(1.0, 9);
    return cfg;
}

} // namespace

TEST(Config, MinimalConfigTakesDefaults) {
    const RunConfig cfg = parse_config(kMinimal);
    EXPECT_EQ(cfg.field.phi, 0.0);
    EXPECT_EQ(cfg.envelope_floor, 1e-8);
    EXPECT_EQ(cfg.grid, MomentumGrid{});
    EXPECT_EQ(cfg.solver, SolverSettings{});
    const json derived = derived_parameters(cfg);
    EXPECT_NEAR(derived["keldysh"].get<double>(), 0.354, 5e-4);
    EXPECT_NEAR(derived["sigma"].get<double>(), 5.0, 1e-12);
}

TEST(Config, DeltaOutOfRangeIsRejectedByName) {
    try {
        parse_config(R"({"field": {"e0_over_ecr": 0.1, "tau_m": 100, "omega_m": 0.05, "delta": 1.5}})");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field(), "delta");
    }
}

TEST(Config, StructuralErrors) {
    EXPECT_THROW(parse_config(R"({"field": {"tau_m": 100, "omega_m": 0.05, "delta": 0}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"grid": {}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"field": {"e0_over_ecr": 0.1, "tau_m": 100, "omega_m": 0.05, "delta": 0, "chirp": 1}})"),
                 ConfigError);
    EXPECT_THROW(parse_config(R"({"field": {"e0_over_ecr": "big", "tau_m": 100, "omega_m": 0.05, "delta": 0}})"),
                 ConfigError);
    EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
    try {
        parse_config("{\n  \"field\": {\n    \"tau_m\": ,\n  }\n}");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_config(R"({"field": {"e0_over_ecr": 0.1, "tau_m": 100, "omega_m": 0.05, "delta": 0},
                                  "solver": {"formulation": "eleven"}})"),
                 ConfigError);
    EXPECT_THROW(load_config("/nonexistent/pairgen.json"), IoError);
}

TEST(Config, CommentsAreAllowed) {
    const RunConfig cfg = parse_config(R"({
        // few-cycle case
        "field": {"e0_over_ecr": 0.1414213562373095, "tau_m": 100, "omega_m": 0.05, "delta": 0.5}
    })");
    EXPECT_EQ(cfg.field.delta, 0.5);
}

TEST(Config, JsonRoundTrip) {
    RunConfig cfg = small_config(0.25);
    cfg.solver.formulation = Formulation::Full10;
    cfg.output_dir = "elsewhere";
    cfg.grid.qz = 0.125;
    EXPECT_EQ(config_from_json(config_to_json(cfg)), cfg);
}

TEST(Config, ShippedConfigsLoad) {
    const fs::path dir = fs::path(PAIRGEN_SOURCE_DIR) / "configs";
    int loaded = 0;
    for (const auto &entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json")
            continue;
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
        ++loaded;
    }
    EXPECT_GE(loaded, 1);
}

TEST(Manifest, EchoesDerivedParameters) {
    RunConfig cfg = small_config();
    const json d = derived_parameters(cfg);
    EXPECT_EQ(d["window"][0].get<double>(), -d["window"][1].get<double>());
    EXPECT_NEAR(d["window"][1].get<double>(), 607.0, 0.5);
    cfg.field.omega = 0.5;
    cfg.grid = MomentumGrid::square(1.3, 9);
    const json m = derived_parameters(cfg);
    EXPECT_EQ(m["threshold_order"].get<int>(), 5);
    EXPECT_NEAR(m["ring_radii"][0]["radius"].get<double>(), 0.7228, 5e-5);
    EXPECT_NEAR(m["effective_mass"].get<double>(), 1.0198, 5e-5);
    cfg.field.e0_over_ecr = 0.0;
    EXPECT_TRUE(derived_parameters(cfg)["keldysh"].is_null());
}

TEST(Outputs, ZeroGridWritesFourRows) {
    SpectrumField s;
    s.grid = MomentumGrid::square(1.0, 2);
    s.values.assign(4, 0.0);
    const std::string csv = spectrum_csv(s);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    EXPECT_EQ(csv.rfind("q_x,q_y,f\n", 0), 0u);
    EXPECT_NE(csv.find("-1,-1,0\n"), std::string::npos);
}

TEST(Outputs, CsvRoundTripIsExact) {
    const fs::path dir = scratch_dir("roundtrip");
    SpectrumField s;
    s.grid = MomentumGrid{-0.3, 1.1, 7, -1.0, 0.7, 5, 0.0};
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t k = 0; k < s.grid.size(); ++k)
        s.values.push_back(std::ldexp(u(rng), -static_cast<int>(k % 40)));
    write_outputs(s, std::nullopt, {}, json::object(), dir);
    const SpectrumField back = read_spectrum_csv(dir / "spectrum.csv");
    EXPECT_EQ(back.grid.nx, s.grid.nx);
    EXPECT_EQ(back.grid.ny, s.grid.ny);
    EXPECT_EQ(back.grid.qx_max, s.grid.qx_max);
    EXPECT_EQ(back.grid.qy_min, s.grid.qy_min);
    ASSERT_EQ(back.values.size(), s.values.size());
    for (std::size_t k = 0; k < s.values.size(); ++k)
        EXPECT_EQ(back.values[k], s.values[k]);
    fs::remove_all(dir);
}

TEST(Outputs, MalformedCsvIsRejected) {
    const fs::path dir = scratch_dir("malformed");
    std::ofstream(dir / "a.csv") << "x,y,z\n";
    EXPECT_THROW(read_spectrum_csv(dir / "a.csv"), IoError);
    std::ofstream(dir / "b.csv") << "q_x,q_y,f\n0,0,1\n0,1,2\n1,0,3\n1,1,4x\n";
    EXPECT_THROW(read_spectrum_csv(dir / "b.csv"), IoError);
    std::ofstream(dir / "c.csv") << "q_x,q_y,f\n0,0,1\n0,1,2\n1,1,3\n1,0,4\n";
    EXPECT_THROW(read_spectrum_csv(dir / "c.csv"), IoError);
    EXPECT_THROW(read_spectrum_csv(dir / "missing.csv"), IoError);
    fs::remove_all(dir);
}

TEST(Outputs, IdenticalRunsWriteIdenticalFiles) {
    const fs::path a = scratch_dir("det_a");
    const fs::path b = scratch_dir("det_b");
    const RunConfig cfg = small_config(0.5);
    const std::vector<int> no_rings;
    run_spectrum(cfg, no_rings, SweepOptions{1}, a);
    run_spectrum(cfg, no_rings, SweepOptions{2}, b);
    for (const char *name : {"spectrum.csv", "features.json", "rings.json"})
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    // The manifests differ only in timing and worker count.
    json ma = json::parse(slurp(a / "manifest.json"));
    json mb = json::parse(slurp(b / "manifest.json"));
    for (json *m : {&ma, &mb}) {
        (*m)["run"].erase("wall_time_s");
        (*m)["run"].erase("workers");
    }
    EXPECT_EQ(ma, mb);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Outputs, ManifestConfigReproducesTheRun) {
    const fs::path a = scratch_dir("closure_a");
    const fs::path b = scratch_dir("closure_b");
    RunConfig cfg = small_config(0.3);
    cfg.grid = MomentumGrid{-0.8, 0.9, 7, -0.5, 0.6, 6, 0.05};
    cfg.solver.rel_tol = 5e-9;
    const std::vector<int> no_rings;
    run_spectrum(cfg, no_rings, SweepOptions{1}, a);
    const json manifest = json::parse(slurp(a / "manifest.json"));
    const RunConfig echoed = config_from_json(manifest["config"]);
    EXPECT_EQ(echoed, cfg);
    run_spectrum(echoed, no_rings, SweepOptions{1}, b);
    EXPECT_EQ(slurp(a / "spectrum.csv"), slurp(b / "spectrum.csv"));
    EXPECT_EQ(manifest["run"]["mode_count"].get<std::size_t>(), 42u);
    EXPECT_TRUE(manifest["run"]["seed"].is_null());
    EXPECT_EQ(manifest["outputs"]["spectrum"], "spectrum.csv");
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Presets, NamesAndParameters) {
    const auto &names = preset_names();
    EXPECT_EQ(names.size(), 14u);
    for (const auto &name : names)
        for (Scale s : {Scale::Desk, Scale::Full})
            EXPECT_NO_THROW(make_preset(name, s)) << name;
    EXPECT_THROW(make_preset("fig7", Scale::Desk), ConfigError);
    EXPECT_THROW(scale_from_string("huge"), ConfigError);

    const Preset fig1a = make_preset("fig1a", Scale::Desk);
    ASSERT_EQ(fig1a.spectra.size(), 1u);
    const RunConfig &c1 = fig1a.spectra[0].config;
    EXPECT_EQ(c1.field.delta, 0.0);
    EXPECT_EQ(c1.field.omega, 0.05);
    EXPECT_NEAR(derived_parameters(c1)["keldysh"].get<double>(), 0.354, 5e-4);

    const Preset fig2a = make_preset("fig2a", Scale::Desk);
    EXPECT_EQ(fig2a.spectra[0].config.field.tau, 300.0);
    EXPECT_NEAR(derived_parameters(fig2a.spectra[0].config)["sigma"].get<double>(), 15.0, 1e-12);

    const Preset fig4a = make_preset("fig4a", Scale::Desk);
    const auto &rings = fig4a.spectra[0].ring_orders;
    ASSERT_FALSE(rings.empty());
    EXPECT_EQ(rings.front(), 5);
    EXPECT_NEAR(ring_radius_analytic(rings.front(), fig4a.spectra[0].config.field), 0.7228, 5e-5);

    const Preset fig6 = make_preset("fig6", Scale::Desk);
    ASSERT_FALSE(fig6.scans.empty());
    EXPECT_EQ(fig6.scans[0].axis, ScanAxis::Delta);
    EXPECT_EQ(fig6.scans[0].values.front(), 0.0);
    EXPECT_EQ(fig6.scans[0].values.back(), 1.0);
}

TEST(Presets, RunWritesIntoLabelledDirectories) {
    Preset p;
    p.name = "tiny";
    RunConfig cfg = small_config(0.5);
    cfg.grid = MomentumGrid::square(1.0, 5);
    p.spectra.push_back({"tiny_spectrum", cfg, {}});
    p.scans.push_back({"tiny_scan", cfg, ScanAxis::Delta, {0.0, 1.0}});
    const fs::path dir = scratch_dir("preset");
    const PresetOutcome out = run_preset(p, SweepOptions{1}, dir);
    EXPECT_TRUE(fs::exists(dir / "tiny_spectrum" / "spectrum.csv"));
    EXPECT_TRUE(fs::exists(dir / "tiny_spectrum" / "manifest.json"));
    EXPECT_TRUE(fs::exists(dir / "tiny_scan" / "scan.csv"));
    ASSERT_EQ(out.scans.size(), 1u);
    EXPECT_GT(out.scans[0].second.points[0].density, out.scans[0].second.points[1].density);
    fs::remove_all(dir);
}
