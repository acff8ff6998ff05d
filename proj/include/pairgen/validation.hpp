#pragma once

// Cross-checks between independent solution routes. Used by the `validate`
// subcommand and by the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pairgen/mode_solver.hpp"
#include "pairgen/qve_oracle.hpp"
#include "pairgen/spectrum.hpp"

namespace pairgen {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;  ///< worst observed value of the checked quantity
    double threshold = 0.0; ///< pass bound on `measured`
    std::string detail;
};

/// Linearly polarized few-cycle pulse: omega = 0.05 m, E0 = 0.1 sqrt(2) E_cr, tau = 100/m.
inline FieldConfig few_cycle_linear_field() {
    FieldConfig c;
    c.e0_over_ecr = 0.1 * std::numbers::sqrt2;
    c.tau = 100.0;
    c.omega = 0.05;
    c.delta = 0.0;
    return c;
}

/// `count` momenta drawn uniformly from the ball |q| <= radius with a fixed seed.
inline std::vector<Vec3> random_modes(std::size_t count, double radius, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<Vec3> out;
    while (out.size() < count) {
        const Vec3 q{u(rng), u(rng), u(rng)};
        if (norm(q) <= radius)
            out.push_back(q);
    }
    return out;
}

inline CheckResult check_dual_formulation(const PulseField &field, std::span<const Vec3> modes,
                                          const SolverSettings &settings, double tolerance = 1e-6) {
    SolverSettings full = settings;
    full.formulation = Formulation::Full10;
    SolverSettings reduced = settings;
    reduced.formulation = Formulation::Reduced;
    double worst = 0.0;
    for (const Vec3 &q : modes)
        worst = std::max(worst, std::abs(integrate_mode(q, field, reduced) - integrate_mode(q, field, full)));
    return {"dual formulation |f_reduced - f_full10|", worst <= tolerance, worst, tolerance,
            std::to_string(modes.size()) + " modes"};
}

inline CheckResult check_qve(const PulseField &field, std::span<const Vec3> modes, const SolverSettings &settings,
                             double tolerance = 1e-6) {
    SolverSettings reduced = settings;
    reduced.formulation = Formulation::Reduced;
    double worst = 0.0;
    for (const Vec3 &q : modes)
        worst = std::max(worst, std::abs(integrate_mode(q, field, reduced) - integrate_qve(q, field, settings)));
    return {"quantum Vlasov oracle |f_reduced - f_qve|", worst <= tolerance, worst, tolerance,
            std::to_string(modes.size()) + " modes"};
}

inline CheckResult check_conservation(const PulseField &field, std::span<const Vec3> modes,
                                      const SolverSettings &settings, double tolerance = 1e-8) {
    double worst = 0.0;
    for (const Vec3 &q : modes)
        worst = std::max(worst, full10_norm_drift(q, field, settings));
    return {"full10 norm |s^2+v^2+a^2+t1^2 - 4|", worst <= tolerance, worst, tolerance,
            std::to_string(modes.size()) + " trajectories"};
}

/// max |f(qx, qy) - f(qx, -qy)| over a q_y-symmetric grid.
inline double mirror_defect_y(const SpectrumField &spec) {
    const MomentumGrid &g = spec.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.ny; ++j)
            worst = std::max(worst, std::abs(spec.at(i, j) - spec.at(i, g.ny - 1 - j)));
    return worst;
}

inline CheckResult check_mirror_symmetry(const SpectrumField &spec, double tolerance = 1e-6) {
    const double d = mirror_defect_y(spec);
    return {"mirror symmetry max|f(qx,qy) - f(qx,-qy)|", d <= tolerance, d, tolerance,
            std::to_string(spec.grid.nx) + "x" + std::to_string(spec.grid.ny) + " grid"};
}

struct Bounds {
    double min;
    double max;
};

inline Bounds value_bounds(const SpectrumField &spec) {
    const auto [lo, hi] = std::minmax_element(spec.values.begin(), spec.values.end());
    return {*lo, *hi};
}

/// Oracle suite run by `pairgen validate`.
inline std::vector<CheckResult> run_validation_suite(bool quick) {
    const PulseField field(few_cycle_linear_field());
    const SolverSettings settings;
    const auto modes = random_modes(quick ? 6 : 50, 1.0, 20240611);
    const auto trajectories = random_modes(quick ? 2 : 10, 1.0, 7);

    std::vector<CheckResult> out;
    out.push_back(check_dual_formulation(field, modes, settings));
    out.push_back(check_qve(field, modes, settings));
    out.push_back(check_conservation(field, trajectories, settings));

    const SpectrumField spec =
        compute_spectrum(MomentumGrid::square(1.0, quick ? 11 : 31), field, settings, SweepOptions{});
    out.push_back(check_mirror_symmetry(spec));
    const Bounds b = value_bounds(spec);
    out.push_back({"occupation bounds -1e-8 <= f <= 2+1e-8", b.min >= -1e-8 && b.max <= 2.0 + 1e-8, b.min, -1e-8,
                   "max f = " + std::to_string(b.max)});

    const Vec3 q = modes.front();
    const double window_end = field.window().end;
    const auto trace = integrate_mode_trajectory(q, field, settings, std::span<const double>(&window_end, 1));
    const double mismatch = std::abs(trace.back().f - integrate_mode(q, field, settings));
    out.push_back({"trajectory endpoint equals integrate_mode", mismatch <= 1e-10, mismatch, 1e-10, ""});
    return out;
}

} // namespace pairgen
