#pragma once

// Run orchestration: single spectra with outputs, and the figure presets.

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pairgen/analysis.hpp"
#include "pairgen/io.hpp"
#include "pairgen/scan.hpp"
#include "pairgen/spectrum.hpp"

namespace pairgen {

struct SpectrumOutcome {
    std::string label;
    RunConfig config;
    SpectrumField spectrum;
    std::optional<SpectrumFeatures> features;
    std::vector<RingReport> rings;
    double density = 0.0;
    json manifest;
};

/// Computes a spectrum with its features, ring reports and manifest. When
/// `out_dir` is given all files are written there after the computation.
inline SpectrumOutcome run_spectrum(const RunConfig &cfg, const std::vector<int> &ring_orders,
                                    const SweepOptions &sweep, const std::optional<std::filesystem::path> &out_dir) {
    cfg.validate();
    SweepOptions opts = sweep;
    opts.envelope_floor = cfg.envelope_floor;
    SpectrumOutcome out;
    out.config = cfg;
    out.spectrum = compute_spectrum(cfg.grid, cfg.field, cfg.solver, opts);
    try {
        out.features = spectrum_features(out.spectrum);
    } catch (const EmptySpectrum &) {
        out.features.reset();
    }
    out.rings = detect_rings(out.spectrum, ring_orders);
    out.density = number_density_plane(out.spectrum);
    out.manifest = build_manifest(cfg, out.spectrum, out.density);
    if (out_dir) {
        const OutputFiles files = write_outputs(out.spectrum, out.features, out.rings, out.manifest, *out_dir);
        out.manifest["outputs"] = {{"spectrum", files.spectrum.filename().string()},
                                   {"features", files.features.filename().string()},
                                   {"rings", files.rings.filename().string()}};
    }
    return out;
}

enum class Scale { Full, Desk };

inline Scale scale_from_string(const std::string &s) {
    if (s == "full")
        return Scale::Full;
    if (s == "desk")
        return Scale::Desk;
    throw ConfigError("scale", "expected 'full' or 'desk', got '" + s + "'");
}

struct PresetSpectrum {
    std::string label;
    RunConfig config;
    std::vector<int> ring_orders;
};

struct PresetScan {
    std::string label;
    RunConfig base;
    ScanAxis axis = ScanAxis::Delta;
    std::vector<double> values;
};

struct Preset {
    std::string name;
    std::vector<PresetSpectrum> spectra;
    std::vector<PresetScan> scans;
};

inline const std::vector<std::string> &preset_names() {
    static const std::vector<std::string> names{"fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c",
                                                "fig3",  "fig4a", "fig4b", "fig4c", "fig4d", "fig5",  "fig6"};
    return names;
}

namespace detail {

inline RunConfig figure_config(double omega, double tau, double delta, MomentumGrid grid) {
    RunConfig c;
    c.field.e0_over_ecr = 0.1 * std::numbers::sqrt2;
    c.field.tau = tau;
    c.field.omega = omega;
    c.field.phi = 0.0;
    c.field.delta = delta;
    c.grid = grid;
    return c;
}

inline std::string fixed(double v, int digits = 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::vector<double> arange(double first, double last, double step) {
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((last - first) / step + 1e-9));
    for (long k = 0; k <= n; ++k)
        v.push_back(first + static_cast<double>(k) * step);
    return v;
}

} // namespace detail

/// Parameters of the published momentum spectra and density scans.
/// Desk scale halves the grid resolution and thins the scans.
inline Preset make_preset(const std::string &name, Scale scale) {
    const bool desk = scale == Scale::Desk;
    const MomentumGrid few_cycle = MomentumGrid::square(1.0, desk ? 101 : 201);
    const MomentumGrid rings = MomentumGrid::square(1.3, desk ? 91 : 181);
    const MomentumGrid scan_grid = MomentumGrid::square(1.0, desk ? 51 : 101);
    const std::vector<int> ring_orders{5, 6, 7, 8, 9};
    const double deltas[] = {0.0, 0.5, 0.9, 1.0};

    Preset p;
    p.name = name;
    if (name.size() == 5 && name.starts_with("fig1") && name[4] >= 'a' && name[4] <= 'd') {
        p.spectra.push_back({name, detail::figure_config(0.05, 100.0, deltas[name[4] - 'a'], few_cycle), {}});
    } else if (name.size() == 5 && name.starts_with("fig2") && name[4] >= 'a' && name[4] <= 'c') {
        p.spectra.push_back({name, detail::figure_config(0.05, 300.0, deltas[name[4] - 'a' + 1], few_cycle), {}});
    } else if (name == "fig3") {
        const std::vector<double> ds = desk ? std::vector<double>{0.0, 0.3, 0.6, 1.0}
                                            : std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0};
        for (double d : ds)
            p.spectra.push_back({"fig3_delta" + detail::fixed(d), detail::figure_config(0.1, 100.0, d, few_cycle), {}});
    } else if (name.size() == 5 && name.starts_with("fig4") && name[4] >= 'a' && name[4] <= 'd') {
        p.spectra.push_back({name, detail::figure_config(0.5, 100.0, deltas[name[4] - 'a'], rings), ring_orders});
    } else if (name == "fig5") {
        const std::vector<double> omegas =
            desk ? std::vector<double>{0.05, 0.2, 0.35, 0.5} : detail::arange(0.05, 0.6, 0.025);
        const std::vector<double> ds = desk ? std::vector<double>{0.0, 0.5, 1.0} : std::vector<double>{0.0, 0.5, 0.9, 1.0};
        for (double d : ds)
            p.scans.push_back({"fig5_delta" + detail::fixed(d), detail::figure_config(0.05, 100.0, d, scan_grid),
                               ScanAxis::Omega, omegas});
    } else if (name == "fig6") {
        const std::vector<double> ds = desk ? detail::arange(0.0, 1.0, 0.25) : detail::arange(0.0, 1.0, 0.05);
        const std::vector<double> omegas =
            desk ? std::vector<double>{0.05, 0.5} : std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
        for (double w : omegas)
            p.scans.push_back({"fig6_omega" + detail::fixed(w, 3), detail::figure_config(w, 100.0, 0.0, scan_grid),
                               ScanAxis::Delta, ds});
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    return p;
}

struct PresetOutcome {
    std::vector<SpectrumOutcome> spectra;
    std::vector<std::pair<std::string, ScanResult>> scans;
};

/// Runs every spectrum and scan of a preset, writing into `out_dir/<label>/`.
inline PresetOutcome run_preset(const Preset &preset, const SweepOptions &sweep,
                                const std::optional<std::filesystem::path> &out_dir) {
    PresetOutcome out;
    for (const auto &s : preset.spectra) {
        std::optional<std::filesystem::path> dir;
        if (out_dir)
            dir = *out_dir / s.label;
        out.spectra.push_back(run_spectrum(s.config, s.ring_orders, sweep, dir));
        out.spectra.back().label = s.label;
    }
    for (const auto &s : preset.scans) {
        ScanOptions opts;
        opts.sweep = sweep;
        opts.sweep.envelope_floor = s.base.envelope_floor;
        ScanResult r = scan(s.base.field, s.axis, s.values, s.base.grid, s.base.solver, opts);
        if (out_dir)
            write_scan_outputs(r, s.base, *out_dir / s.label);
        out.scans.emplace_back(s.label, std::move(r));
    }
    return out;
}

} // namespace pairgen
