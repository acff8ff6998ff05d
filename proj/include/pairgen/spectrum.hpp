#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "pairgen/errors.hpp"
#include "pairgen/field.hpp"
#include "pairgen/mode_solver.hpp"

namespace pairgen {

/// Uniform (q_x, q_y) grid with inclusive endpoints on the slice q_z = const.
struct MomentumGrid {
    double qx_min = -1.0;
    double qx_max = 1.0;
    std::size_t nx = 201;
    double qy_min = -1.0;
    double qy_max = 1.0;
    std::size_t ny = 201;
    double qz = 0.0;

    void validate() const {
        if (nx < 2)
            throw ConfigError("nx", "needs at least 2 nodes");
        if (ny < 2)
            throw ConfigError("ny", "needs at least 2 nodes");
        if (!(qx_max > qx_min) || !std::isfinite(qx_min) || !std::isfinite(qx_max))
            throw ConfigError("qx", "max must exceed min");
        if (!(qy_max > qy_min) || !std::isfinite(qy_min) || !std::isfinite(qy_max))
            throw ConfigError("qy", "max must exceed min");
        if (!std::isfinite(qz))
            throw ConfigError("qz", "must be finite");
    }

    static MomentumGrid square(double half_extent, std::size_t n, double qz = 0.0) {
        return {-half_extent, half_extent, n, -half_extent, half_extent, n, qz};
    }

    double dx() const noexcept { return (qx_max - qx_min) / static_cast<double>(nx - 1); }
    double dy() const noexcept { return (qy_max - qy_min) / static_cast<double>(ny - 1); }
    double qx(std::size_t i) const noexcept { return i + 1 == nx ? qx_max : qx_min + static_cast<double>(i) * dx(); }
    double qy(std::size_t j) const noexcept { return j + 1 == ny ? qy_max : qy_min + static_cast<double>(j) * dy(); }
    Vec3 node(std::size_t i, std::size_t j) const noexcept { return {qx(i), qy(j), qz}; }
    std::size_t size() const noexcept { return nx * ny; }

    friend bool operator==(const MomentumGrid &, const MomentumGrid &) = default;
};

struct FailedNode {
    std::size_t ix;
    std::size_t iy;
    std::string message;
};

/// Asymptotic distribution over a MomentumGrid; `at(i, j)` is f at (qx_i, qy_j).
/// Storage is row-major with q_x as the slow index.
struct SpectrumField {
    MomentumGrid grid;
    std::vector<double> values;
    FieldConfig field;
    SolverSettings solver;
    double wall_time_s = 0.0;
    std::size_t workers = 1;
    std::vector<FailedNode> failures; ///< nodes tolerated by a nonzero failure budget (value NaN)

    double at(std::size_t i, std::size_t j) const noexcept { return values[i * grid.ny + j]; }
    double &at(std::size_t i, std::size_t j) noexcept { return values[i * grid.ny + j]; }
};

struct SweepOptions {
    std::size_t workers = 0;        ///< 0 selects hardware concurrency
    std::size_t failure_budget = 0; ///< tolerated failed modes before aborting
    double envelope_floor = 1e-8;
};

inline std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Solves every grid mode on an already tabulated pulse.
inline SpectrumField compute_spectrum(const MomentumGrid &grid, const PulseField &field,
                                      const SolverSettings &settings, const SweepOptions &options = {}) {
    grid.validate();
    settings.validate();
    const auto start = std::chrono::steady_clock::now();
    SpectrumField out;
    out.grid = grid;
    out.field = field.config();
    out.solver = settings;
    out.values.assign(grid.size(), 0.0);
    const std::size_t workers = std::min(resolve_workers(options.workers), grid.nx);
    out.workers = workers;

    std::vector<std::vector<FailedNode>> failures(workers);
    // Static block partition over q_x rows; every worker writes disjoint slots.
    auto run_rows = [&](std::size_t w) {
        const std::size_t begin = grid.nx * w / workers;
        const std::size_t end = grid.nx * (w + 1) / workers;
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < grid.ny; ++j) {
                try {
                    out.at(i, j) = integrate_mode(grid.node(i, j), field, settings);
                } catch (const NumericalFailure &e) {
                    out.at(i, j) = std::numeric_limits<double>::quiet_NaN();
                    failures[w].push_back({i, j, e.what()});
                    if (options.failure_budget == 0)
                        return;
                }
            }
        }
    };
    if (workers == 1) {
        run_rows(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run_rows, w);
    }

    for (auto &list : failures)
        out.failures.insert(out.failures.end(), list.begin(), list.end());
    std::sort(out.failures.begin(), out.failures.end(),
              [](const FailedNode &a, const FailedNode &b) { return std::tie(a.ix, a.iy) < std::tie(b.ix, b.iy); });
    if (out.failures.size() > options.failure_budget) {
        const FailedNode &first = out.failures.front();
        throw SweepFailure(first.message + " (" + std::to_string(out.failures.size()) + " failed modes)", first.ix,
                           first.iy);
    }
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

inline SpectrumField compute_spectrum(const MomentumGrid &grid, const FieldConfig &cfg,
                                      const SolverSettings &settings, const SweepOptions &options = {}) {
    const PulseField field(cfg, options.envelope_floor);
    return compute_spectrum(grid, field, settings, options);
}

/// Plane-slice density (2 pi)^-2 * trapezoidal integral of f over the grid.
/// Rows are summed in a fixed order so the result is independent of how the
/// spectrum was computed.
inline double number_density_plane(const SpectrumField &spec) {
    const MomentumGrid &g = spec.grid;
    auto weight = [](std::size_t k, std::size_t n) { return (k == 0 || k + 1 == n) ? 0.5 : 1.0; };
    double total = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.ny; ++j)
            row += weight(j, g.ny) * spec.at(i, j);
        total += weight(i, g.nx) * row;
    }
    return total * g.dx() * g.dy() / (4.0 * std::numbers::pi * std::numbers::pi);
}

} // namespace pairgen
