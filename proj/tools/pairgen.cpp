// pairgen: pair-production spectra in elliptically polarized pulses.
//
// Exit codes: 0 success, 1 I/O or other failure, 2 configuration error,
// 3 numerical failure, 4 validation failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pairgen/pairgen.hpp"

namespace fs = std::filesystem;
using namespace pairgen;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kValidation = 4 };

std::vector<double> parse_values(const std::string &text) {
    auto number = [&](const std::string &s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != s.size() || s.empty())
            throw ConfigError("values", "cannot parse number '" + s + "'");
        return v;
    };
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, sep);)
        parts.push_back(item);
    if (sep == ',') {
        std::vector<double> out;
        for (const auto &p : parts)
            out.push_back(number(p));
        return out;
    }
    if (parts.size() != 3)
        throw ConfigError("values", "range must be first:last:step");
    const double first = number(parts[0]);
    const double last = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || last < first)
        throw ConfigError("values", "range needs step > 0 and last >= first");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((last - first) / step + 1e-9));
    for (long k = 0; k <= n; ++k)
        out.push_back(first + static_cast<double>(k) * step);
    return out;
}

std::vector<int> parse_orders(const std::string &text) {
    std::vector<int> out;
    if (text.empty())
        return out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception &) {
            throw ConfigError("rings", "cannot parse photon order '" + item + "'");
        }
    }
    return out;
}

void print_summary(const SpectrumOutcome &run) {
    std::printf("%s: %zux%zu modes in %.1f s, density_plane = %.6e\n", run.label.empty() ? "spectrum" : run.label.c_str(),
                run.spectrum.grid.nx, run.spectrum.grid.ny, run.spectrum.wall_time_s, run.density);
    if (run.features)
        std::printf("  peak (%.4f, %.4f) f=%.4e  asymmetry_y=%.3e  lobes_y=%d\n", run.features->peak_qx,
                    run.features->peak_qy, run.features->peak_value, run.features->asymmetry_y,
                    run.features->lobe_count_y);
    for (const auto &r : run.rings) {
        if (r.detected_radius)
            std::printf("  ring n=%d analytic %.4f detected %.4f\n", r.order, r.analytic_radius, *r.detected_radius);
        else
            std::printf("  ring n=%d analytic %.4f not detected\n", r.order, r.analytic_radius);
    }
}

int cmd_spectrum(const std::string &config_path, const std::string &out, std::size_t workers,
                 const std::string &rings) {
    RunConfig cfg = load_config(config_path);
    if (!out.empty())
        cfg.output_dir = out;
    SpectrumOutcome run = run_spectrum(cfg, parse_orders(rings), SweepOptions{workers}, fs::path(cfg.output_dir));
    print_summary(run);
    std::printf("wrote %s\n", cfg.output_dir.c_str());
    return kOk;
}

int cmd_scan(const std::string &config_path, const std::string &axis, const std::string &values,
             const std::string &out, std::size_t workers, bool no_widen) {
    RunConfig cfg = load_config(config_path);
    if (!out.empty())
        cfg.output_dir = out;
    ScanOptions opts;
    opts.sweep.workers = workers;
    opts.sweep.envelope_floor = cfg.envelope_floor;
    opts.auto_widen = !no_widen;
    const std::vector<double> vals = parse_values(values);
    const ScanResult r = scan(cfg.field, scan_axis_from_string(axis), vals, cfg.grid, cfg.solver, opts);
    write_scan_outputs(r, cfg, cfg.output_dir);
    for (const auto &p : r.points)
        std::printf("%s=%.6g  density_plane=%.6e\n", axis.c_str(), p.parameter, p.density);
    std::printf("wrote %s\n", cfg.output_dir.c_str());
    return kOk;
}

int cmd_preset(const std::string &name, const std::string &scale, const std::string &out, std::size_t workers) {
    const Preset preset = make_preset(name, scale_from_string(scale));
    const fs::path dir = out.empty() ? fs::path("out") / (name + "_" + scale) : fs::path(out);
    const PresetOutcome result = run_preset(preset, SweepOptions{workers}, dir);
    for (const auto &s : result.spectra) {
        print_summary(s);
        std::printf("  keldysh=%.4g sigma=%.4g\n", s.manifest["derived"]["keldysh"].get<double>(),
                    s.manifest["derived"]["sigma"].get<double>());
    }
    for (const auto &[label, r] : result.scans) {
        std::printf("%s (%s scan)\n", label.c_str(), to_string(r.axis).c_str());
        for (const auto &p : r.points)
            std::printf("  %.4g  density_plane=%.6e\n", p.parameter, p.density);
    }
    std::printf("wrote %s\n", dir.string().c_str());
    return kOk;
}

int cmd_validate(bool quick) {
    bool ok = true;
    for (const CheckResult &c : run_validation_suite(quick)) {
        std::printf("[%s] %s: %.3e (bound %.1e) %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                    c.threshold, c.detail.c_str());
        ok = ok && c.passed;
    }
    return ok ? kOk : kValidation;
}

int cmd_analyze(const std::string &spectrum_path, const std::string &rings, const std::string &config_path) {
    SpectrumField spec = read_spectrum_csv(spectrum_path);
    const std::vector<int> orders = parse_orders(rings);
    fs::path cfg_path = config_path;
    if (cfg_path.empty()) {
        const fs::path sibling = fs::path(spectrum_path).parent_path() / "manifest.json";
        if (fs::exists(sibling))
            cfg_path = sibling;
    }
    if (!cfg_path.empty()) {
        json root = json::parse(detail::read_text(cfg_path), nullptr, true, true);
        const RunConfig cfg = root.contains("config") ? config_from_json(root.at("config")) : config_from_json(root);
        spec.field = cfg.field;
        spec.grid.qz = cfg.grid.qz;
    } else if (!orders.empty()) {
        throw ConfigError("config", "ring analysis needs the field parameters (--config or a sibling manifest.json)");
    }
    json report;
    try {
        report["features"] = features_to_json(spectrum_features(spec));
    } catch (const EmptySpectrum &) {
        report["features"] = nullptr;
    }
    report["rings"] = rings_to_json(detect_rings(spec, orders));
    report["density_plane"] = number_density_plane(spec);
    std::cout << report.dump(2) << "\n";
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Electron-positron pair production in elliptically polarized pulses"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::size_t workers = 0;
    std::string rings;

    auto *spectrum = app.add_subcommand("spectrum", "Compute a momentum spectrum from a configuration file");
    spectrum->add_option("--config", config_path, "Configuration file (JSON)")->required();
    spectrum->add_option("--out", out, "Output directory (overrides output.dir)");
    spectrum->add_option("--workers", workers, "Worker threads (0 = all cores)");
    spectrum->add_option("--rings", rings, "Photon orders to detect, e.g. 5,6,7");

    std::string axis;
    std::string values;
    bool no_widen = false;
    auto *scan_cmd = app.add_subcommand("scan", "Plane density as a function of delta or omega");
    scan_cmd->add_option("--axis", axis, "delta or omega")->required()->check(CLI::IsMember({"delta", "omega"}));
    scan_cmd->add_option("--values", values, "first:last:step or a comma list")->required();
    scan_cmd->add_option("--config", config_path, "Base configuration file (JSON)")->required();
    scan_cmd->add_option("--out", out, "Output directory (overrides output.dir)");
    scan_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");
    scan_cmd->add_flag("--no-widen", no_widen, "Keep the grid fixed on omega scans");

    std::string preset_name;
    std::string scale = "desk";
    auto *preset = app.add_subcommand("preset", "Reproduce a figure preset");
    preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(preset_names()));
    preset->add_option("--scale", scale, "full or desk")->check(CLI::IsMember({"full", "desk"}));
    preset->add_option("--out", out, "Output directory");
    preset->add_option("--workers", workers, "Worker threads (0 = all cores)");

    bool quick = false;
    auto *validate = app.add_subcommand("validate", "Run the oracle cross-checks");
    validate->add_flag("--quick", quick, "Fewer modes");

    std::string spectrum_path;
    auto *analyze = app.add_subcommand("analyze", "Feature and ring extraction on an existing spectrum CSV");
    analyze->add_option("--spectrum", spectrum_path, "Spectrum CSV")->required();
    analyze->add_option("--rings", rings, "Photon orders, e.g. 5,6,7");
    analyze->add_option("--config", config_path, "Configuration or manifest with the field parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*spectrum)
            return cmd_spectrum(config_path, out, workers, rings);
        if (*scan_cmd)
            return cmd_scan(config_path, axis, values, out, workers, no_widen);
        if (*preset)
            return cmd_preset(preset_name, scale, out, workers);
        if (*validate)
            return cmd_validate(quick);
        if (*analyze)
            return cmd_analyze(spectrum_path, rings, config_path);
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kConfig;
    } catch (const NoRealSolution &e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kConfig;
    } catch (const NumericalFailure &e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const SweepFailure &e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const json::exception &e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kConfig;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
    return kOk;
}
