#pragma once

// Run configuration files, run manifests and on-disk spectra.
//
// Configurations and manifests are JSON. A manifest's "config" member uses
// the configuration schema with every default filled in, so it can be fed
// back as a configuration file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairgen/analysis.hpp"
#include "pairgen/errors.hpp"
#include "pairgen/field.hpp"
#include "pairgen/mode_solver.hpp"
#include "pairgen/scan.hpp"
#include "pairgen/spectrum.hpp"

namespace pairgen {

using json = nlohmann::json;

struct RunConfig {
    FieldConfig field;
    double envelope_floor = 1e-8;
    MomentumGrid grid;
    SolverSettings solver;
    std::string output_dir = "out";

    void validate() const {
        field.validate();
        grid.validate();
        solver.validate();
        if (!(envelope_floor > 0.0 && envelope_floor < 1.0))
            throw ConfigError("envelope_floor", "must lie in (0, 1)");
    }

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

namespace detail {

inline void reject_unknown(const json &obj, const std::string &section, std::initializer_list<const char *> known) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto &[key, _] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError(section.empty() ? key : section + "." + key, "unknown key");
}

template <class T> void read_opt(const json &obj, const std::string &section, const char *key, T &target) {
    if (!obj.contains(key))
        return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(section + "." + key, "has the wrong type");
    }
}

template <class T> void read_req(const json &obj, const std::string &section, const char *key, T &target) {
    if (!obj.contains(key))
        throw ConfigError(section + "." + key, "is required");
    read_opt(obj, section, key, target);
}

inline const json &section_of(const json &root, const char *name) {
    static const json empty = json::object();
    if (!root.contains(name))
        return empty;
    const json &s = root.at(name);
    if (!s.is_object())
        throw ConfigError(name, "must be an object");
    return s;
}

inline std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(path.string(), "cannot open for writing");
    out << text;
    out.flush();
    if (!out)
        throw IoError(path.string(), "write failed");
}

} // namespace detail

inline RunConfig config_from_json(const json &root) {
    if (!root.is_object())
        throw ConfigError("", "configuration must be a JSON object");
    detail::reject_unknown(root, "", {"field", "grid", "solver", "output"});
    RunConfig cfg;

    const json &field = detail::section_of(root, "field");
    if (!root.contains("field"))
        throw ConfigError("field", "section is required");
    detail::reject_unknown(field, "field", {"e0_over_ecr", "tau_m", "omega_m", "phi", "delta", "envelope_floor"});
    detail::read_req(field, "field", "e0_over_ecr", cfg.field.e0_over_ecr);
    detail::read_req(field, "field", "tau_m", cfg.field.tau);
    detail::read_req(field, "field", "omega_m", cfg.field.omega);
    detail::read_req(field, "field", "delta", cfg.field.delta);
    detail::read_opt(field, "field", "phi", cfg.field.phi);
    detail::read_opt(field, "field", "envelope_floor", cfg.envelope_floor);

    const json &grid = detail::section_of(root, "grid");
    detail::reject_unknown(grid, "grid", {"qx_min", "qx_max", "nx", "qy_min", "qy_max", "ny", "qz"});
    detail::read_opt(grid, "grid", "qx_min", cfg.grid.qx_min);
    detail::read_opt(grid, "grid", "qx_max", cfg.grid.qx_max);
    detail::read_opt(grid, "grid", "nx", cfg.grid.nx);
    detail::read_opt(grid, "grid", "qy_min", cfg.grid.qy_min);
    detail::read_opt(grid, "grid", "qy_max", cfg.grid.qy_max);
    detail::read_opt(grid, "grid", "ny", cfg.grid.ny);
    detail::read_opt(grid, "grid", "qz", cfg.grid.qz);

    const json &solver = detail::section_of(root, "solver");
    detail::reject_unknown(solver, "solver", {"rel_tol", "abs_tol", "max_steps", "formulation"});
    detail::read_opt(solver, "solver", "rel_tol", cfg.solver.rel_tol);
    detail::read_opt(solver, "solver", "abs_tol", cfg.solver.abs_tol);
    detail::read_opt(solver, "solver", "max_steps", cfg.solver.max_steps);
    std::string form = to_string(cfg.solver.formulation);
    detail::read_opt(solver, "solver", "formulation", form);
    cfg.solver.formulation = formulation_from_string(form);

    const json &output = detail::section_of(root, "output");
    detail::reject_unknown(output, "output", {"dir"});
    detail::read_opt(output, "output", "dir", cfg.output_dir);

    cfg.validate();
    return cfg;
}

/// Parses configuration text; syntax errors report line and column.
inline RunConfig parse_config(const std::string &text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error &e) {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError("", "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                                  ": " + e.what());
    }
    return config_from_json(root);
}

inline RunConfig load_config(const std::filesystem::path &path) { return parse_config(detail::read_text(path)); }

inline json config_to_json(const RunConfig &cfg) {
    return {
        {"field",
         {{"e0_over_ecr", cfg.field.e0_over_ecr},
          {"tau_m", cfg.field.tau},
          {"omega_m", cfg.field.omega},
          {"phi", cfg.field.phi},
          {"delta", cfg.field.delta},
          {"envelope_floor", cfg.envelope_floor}}},
        {"grid",
         {{"qx_min", cfg.grid.qx_min},
          {"qx_max", cfg.grid.qx_max},
          {"nx", cfg.grid.nx},
          {"qy_min", cfg.grid.qy_min},
          {"qy_max", cfg.grid.qy_max},
          {"ny", cfg.grid.ny},
          {"qz", cfg.grid.qz}}},
        {"solver",
         {{"rel_tol", cfg.solver.rel_tol},
          {"abs_tol", cfg.solver.abs_tol},
          {"max_steps", cfg.solver.max_steps},
          {"formulation", to_string(cfg.solver.formulation)}}},
        {"output", {{"dir", cfg.output_dir}}},
    };
}

/// Quantities recomputable from the field and grid alone.
inline json derived_parameters(const RunConfig &cfg) {
    json d;
    const FieldConfig &f = cfg.field;
    d["sigma"] = f.sigma();
    d["peak_amplitude"] = f.peak_amplitude();
    d["keldysh"] = f.e0_over_ecr > 0.0 ? json(keldysh(f)) : json(nullptr);
    const TimeWindow w = integration_window(f, cfg.envelope_floor);
    d["window"] = {w.start, w.end};
    if (f.omega > 0.0) {
        d["effective_mass"] = effective_mass(f);
        const int n0 = threshold_order(f);
        d["threshold_order"] = n0;
        const double reach = std::hypot(std::max(std::abs(cfg.grid.qx_min), std::abs(cfg.grid.qx_max)),
                                        std::max(std::abs(cfg.grid.qy_min), std::abs(cfg.grid.qy_max)));
        json rings = json::array();
        for (int n = n0; n < n0 + 64 && rings.size() < 12; ++n) {
            const double q = ring_radius_analytic(n, f);
            if (q > reach)
                break;
            rings.push_back({{"order", n}, {"radius", q}});
        }
        d["ring_radii"] = rings;
    } else {
        d["effective_mass"] = nullptr;
        d["threshold_order"] = nullptr;
        d["ring_radii"] = json::array();
    }
    return d;
}

inline constexpr const char *kDensityNormalization =
    "n = (2 pi)^-2 * trapezoidal integral of f(q_x, q_y, q_z) dq_x dq_y over the grid at fixed q_z";

inline json features_to_json(const SpectrumFeatures &f) {
    return {{"peak_location", {f.peak_qx, f.peak_qy}},
            {"peak_value", f.peak_value},
            {"asymmetry_y", std::isnan(f.asymmetry_y) ? json(nullptr) : json(f.asymmetry_y)},
            {"lobe_count_y", f.lobe_count_y}};
}

inline json rings_to_json(const std::vector<RingReport> &rings) {
    json arr = json::array();
    for (const auto &r : rings)
        arr.push_back({{"order", r.order},
                       {"analytic_radius", r.analytic_radius},
                       {"detected", r.detected_radius.has_value()},
                       {"detected_radius", r.detected_radius ? json(*r.detected_radius) : json(nullptr)},
                       {"detection_prominence", r.detection_prominence}});
    return arr;
}

/// Manifest for a single spectrum run.
inline json build_manifest(const RunConfig &cfg, const SpectrumField &spec, double density) {
    json failures = json::array();
    for (const auto &f : spec.failures)
        failures.push_back({{"ix", f.ix}, {"iy", f.iy}, {"message", f.message}});
    return {
        {"config", config_to_json(cfg)},
        {"derived", derived_parameters(cfg)},
        {"run",
         {{"wall_time_s", spec.wall_time_s},
          {"workers", spec.workers},
          {"deterministic", true},
          {"seed", nullptr},
          {"mode_count", spec.grid.size()},
          {"failed_modes", failures}}},
        {"density_plane", density},
        {"density_normalization", kDensityNormalization},
    };
}

struct OutputFiles {
    std::filesystem::path spectrum;
    std::filesystem::path features;
    std::filesystem::path rings;
    std::filesystem::path manifest;
};

/// Spectrum CSV: header `q_x,q_y,f`, one row per node, q_x slow, 17 significant digits.
inline std::string spectrum_csv(const SpectrumField &spec) {
    std::string out = "q_x,q_y,f\n";
    out.reserve(out.size() + spec.values.size() * 72);
    char line[128];
    for (std::size_t i = 0; i < spec.grid.nx; ++i) {
        for (std::size_t j = 0; j < spec.grid.ny; ++j) {
            const int n = std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", spec.grid.qx(i), spec.grid.qy(j),
                                        spec.at(i, j));
            out.append(line, static_cast<std::size_t>(n));
        }
    }
    return out;
}

/// Writes spectrum.csv, features.json, rings.json and manifest.json into `out_dir`.
/// The manifest gains an "outputs" member listing the file names.
inline OutputFiles write_outputs(const SpectrumField &spec, const std::optional<SpectrumFeatures> &features,
                                 const std::vector<RingReport> &rings, json manifest,
                                 const std::filesystem::path &out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError(out_dir.string(), "cannot create directory: " + ec.message());
    OutputFiles files{out_dir / "spectrum.csv", out_dir / "features.json", out_dir / "rings.json",
                      out_dir / "manifest.json"};
    detail::write_text(files.spectrum, spectrum_csv(spec));
    detail::write_text(files.features, (features ? features_to_json(*features) : json(nullptr)).dump(2) + "\n");
    detail::write_text(files.rings, rings_to_json(rings).dump(2) + "\n");
    manifest["outputs"] = {{"spectrum", files.spectrum.filename().string()},
                           {"features", files.features.filename().string()},
                           {"rings", files.rings.filename().string()}};
    detail::write_text(files.manifest, manifest.dump(2) + "\n");
    return files;
}

/// Reads a spectrum CSV back. Values are bit-exact; the grid is inferred from
/// the first and last coordinates. Field metadata is left at its defaults.
inline SpectrumField read_spectrum_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path.string(), "cannot open for reading");
    std::string line;
    if (!std::getline(in, line) || line != "q_x,q_y,f")
        throw IoError(path.string(), "expected header 'q_x,q_y,f'");
    std::vector<double> qx;
    std::vector<double> qy;
    std::vector<double> f;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty())
            continue;
        double a = 0.0;
        double b = 0.0;
        char *end = nullptr;
        const char *s = line.c_str();
        a = std::strtod(s, &end);
        if (*end != ',')
            throw IoError(path.string(), "malformed row " + std::to_string(row));
        b = std::strtod(end + 1, &end);
        if (*end != ',')
            throw IoError(path.string(), "malformed row " + std::to_string(row));
        const double c = std::strtod(end + 1, &end);
        if (*end != '\0' && *end != '\r')
            throw IoError(path.string(), "malformed row " + std::to_string(row));
        qx.push_back(a);
        qy.push_back(b);
        f.push_back(c);
    }
    if (f.size() < 4)
        throw IoError(path.string(), "spectrum needs at least 2x2 nodes");
    std::size_t ny = 1;
    while (ny < qx.size() && qx[ny] == qx[0])
        ++ny;
    if (f.size() % ny != 0)
        throw IoError(path.string(), "rows do not form a rectangular grid");
    SpectrumField spec;
    spec.grid.nx = f.size() / ny;
    spec.grid.ny = ny;
    spec.grid.qx_min = qx.front();
    spec.grid.qx_max = qx.back();
    spec.grid.qy_min = qy.front();
    spec.grid.qy_max = qy[ny - 1];
    spec.grid.qz = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (qx[k] != qx[(k / ny) * ny] || qy[k] != qy[k % ny])
            throw IoError(path.string(), "rows are not row-major over the grid (row " + std::to_string(k + 2) + ")");
    spec.grid.validate();
    spec.values = std::move(f);
    return spec;
}

inline json scan_to_json(const ScanResult &scan) {
    json pts = json::array();
    for (const auto &p : scan.points)
        pts.push_back({{"parameter", p.parameter},
                       {"density", p.density},
                       {"grid", {p.grid.qx_min, p.grid.qx_max, p.grid.nx, p.grid.qy_min, p.grid.qy_max, p.grid.ny}},
                       {"wall_time_s", p.wall_time_s}});
    return {{"axis", to_string(scan.axis)}, {"points", pts}, {"density_normalization", kDensityNormalization}};
}

inline std::string scan_csv(const ScanResult &scan) {
    std::string out = "parameter,density\n";
    char line[96];
    for (const auto &p : scan.points) {
        const int n = std::snprintf(line, sizeof line, "%.17g,%.17g\n", p.parameter, p.density);
        out.append(line, static_cast<std::size_t>(n));
    }
    return out;
}

/// Writes scan.csv and manifest.json for a scan run.
inline void write_scan_outputs(const ScanResult &scan, const RunConfig &base, const std::filesystem::path &out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError(out_dir.string(), "cannot create directory: " + ec.message());
    detail::write_text(out_dir / "scan.csv", scan_csv(scan));
    json manifest = {{"config", config_to_json(base)},
                     {"derived", derived_parameters(base)},
                     {"scan", scan_to_json(scan)},
                     {"run", {{"deterministic", true}, {"seed", nullptr}}},
                     {"outputs", {{"scan", "scan.csv"}}}};
    detail::write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

} // namespace pairgen
