#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "pairgen/analysis.hpp"
#include "pairgen/spectrum.hpp"

namespace pairgen {

enum class ScanAxis { Delta, Omega };

inline std::string to_string(ScanAxis a) { return a == ScanAxis::Delta ? "delta" : "omega"; }

inline ScanAxis scan_axis_from_string(const std::string &s) {
    if (s == "delta")
        return ScanAxis::Delta;
    if (s == "omega")
        return ScanAxis::Omega;
    throw ConfigError("axis", "expected 'delta' or 'omega', got '" + s + "'");
}

struct ScanPoint {
    double parameter = 0.0;
    double density = 0.0;
    MomentumGrid grid;
    double wall_time_s = 0.0;
};

struct ScanResult {
    ScanAxis axis = ScanAxis::Delta;
    FieldConfig base;
    SolverSettings solver;
    std::vector<ScanPoint> points;
};

struct ScanOptions {
    SweepOptions sweep;
    bool auto_widen = true; ///< omega scans: stretch the grid over the first two above-threshold rings
};

inline FieldConfig with_parameter(FieldConfig cfg, ScanAxis axis, double value) {
    (axis == ScanAxis::Delta ? cfg.delta : cfg.omega) = value;
    return cfg;
}

/// Grid stretched (same node count) so the first two multiphoton rings fit,
/// when the grid is centred on the origin. Otherwise returned unchanged.
inline MomentumGrid widen_for_rings(const MomentumGrid &grid, const FieldConfig &cfg) {
    if (!(cfg.omega > 0.0) || grid.qx_min != -grid.qx_max || grid.qy_min != -grid.qy_max)
        return grid;
    const double needed = 1.1 * ring_radius_analytic(threshold_order(cfg) + 1, cfg);
    MomentumGrid g = grid;
    g.qx_max = std::max(g.qx_max, needed);
    g.qx_min = -g.qx_max;
    g.qy_max = std::max(g.qy_max, needed);
    g.qy_min = -g.qy_max;
    return g;
}

/// Plane density for each value of the scanned parameter.
inline ScanResult scan(const FieldConfig &base, ScanAxis axis, std::span<const double> values,
                       const MomentumGrid &grid, const SolverSettings &settings, const ScanOptions &options = {}) {
    if (values.empty())
        throw ConfigError("values", "scan needs at least one value");
    const bool increasing = values.size() < 2 || values[1] > values[0];
    for (std::size_t k = 1; k < values.size(); ++k)
        if (increasing ? !(values[k] > values[k - 1]) : !(values[k] < values[k - 1]))
            throw ConfigError("values", "scan values must be strictly monotone");
    for (double v : values)
        with_parameter(base, axis, v).validate();

    ScanResult out;
    out.axis = axis;
    out.base = base;
    out.solver = settings;
    for (double v : values) {
        const FieldConfig cfg = with_parameter(base, axis, v);
        const MomentumGrid g = (options.auto_widen && axis == ScanAxis::Omega) ? widen_for_rings(grid, cfg) : grid;
        const SpectrumField spec = compute_spectrum(g, cfg, settings, options.sweep);
        out.points.push_back({v, number_density_plane(spec), g, spec.wall_time_s});
    }
    return out;
}

} // namespace pairgen
