#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pairgen/dop853.hpp"
#include "pairgen/errors.hpp"
#include "pairgen/field.hpp"
#include "pairgen/wigner.hpp"

namespace pairgen {

enum class Formulation { Reduced, Full10 };

inline std::string to_string(Formulation f) { return f == Formulation::Reduced ? "reduced" : "full10"; }

inline Formulation formulation_from_string(const std::string &s) {
    if (s == "reduced")
        return Formulation::Reduced;
    if (s == "full10")
        return Formulation::Full10;
    throw ConfigError("formulation", "expected 'reduced' or 'full10', got '" + s + "'");
}

struct SolverSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    long max_steps = 2'000'000;
    Formulation formulation = Formulation::Reduced;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1e-3))
            throw ConfigError("rel_tol", "must lie in (0, 1e-3)");
        if (!(abs_tol > 0.0 && abs_tol < 1e-6))
            throw ConfigError("abs_tol", "must lie in (0, 1e-6)");
        if (max_steps < 10'000)
            throw ConfigError("max_steps", "must be at least 1e4");
    }

    friend bool operator==(const SolverSettings &, const SolverSettings &) = default;
};

struct ModeResult {
    double f = 0.0;
    ode::Stats stats;
};

namespace detail {

// Initial step guess: a fiftieth of the fastest time scale in the mode.
inline double initial_step_guess(const Vec3 &q, const PulseField &field) {
    const double p_max = norm(q) + field.potential().max_norm();
    const double omega_max = std::sqrt(1.0 + p_max * p_max);
    const double laser = field.config().omega > 0.0 ? 1.0 / field.config().omega
                                                    : std::numeric_limits<double>::infinity();
    return std::min(1.0 / omega_max, laser) / 50.0;
}

inline ode::StepControl step_control(const Vec3 &q, const PulseField &field, const SolverSettings &s) {
    ode::StepControl c;
    c.rel_tol = s.rel_tol;
    c.abs_tol = s.abs_tol;
    c.max_steps = s.max_steps;
    c.initial_step = initial_step_guess(q, field);
    return c;
}

inline void raise_on_failure(const ode::Outcome &out, const Vec3 &q) {
    switch (out.status) {
    case ode::Status::Success:
        return;
    case ode::Status::StepBudgetExhausted:
        throw StepBudgetExhausted(q, out.t_reached);
    case ode::Status::StepUnderflow:
        throw NumericalFailure("step size underflow", q, out.t_reached);
    case ode::Status::NonFinite:
        throw NumericalFailure("nonfinite state", q, out.t_reached);
    }
}

struct ReducedRhs {
    Vec3 q;
    const PulseField *field;
    void operator()(double t, const Vector10 &y, Vector10 &dy) const {
        const Vec3 p = q - field->vector_potential(t);
        dy = rhs_reduced(ReducedModeState{y}, p, field->electric(t)).data;
    }
};

struct Full10Rhs {
    Vec3 q;
    const PulseField *field;
    void operator()(double t, const Vector10 &y, Vector10 &dy) const {
        const Vec3 p = q - field->vector_potential(t);
        dy = rhs_full10(WignerState10{y}, p).data;
    }
};

inline Vector10 initial_state(const Vec3 &q, const PulseField &field, Formulation form) {
    if (form == Formulation::Reduced)
        return Vector10{};
    return vacuum_state(q - field.vector_potential(field.window().start)).data;
}

inline double distribution(const Vector10 &y, const Vec3 &q, const PulseField &field, Formulation form, double t) {
    if (form == Formulation::Reduced)
        return y[0];
    return distribution_from_state10(WignerState10{y}, q - field.vector_potential(t));
}

template <class Observer>
ModeResult run_mode(const Vec3 &q, const PulseField &field, const SolverSettings &settings, Observer &&observer,
                    Vector10 *final_state = nullptr) {
    settings.validate();
    if (!(std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z)))
        throw ConfigError("q", "momentum must be finite");
    ode::Dop853<10> stepper(step_control(q, field, settings));
    const TimeWindow w = field.window();
    Vector10 y = initial_state(q, field, settings.formulation);
    ode::Outcome out;
    if (settings.formulation == Formulation::Reduced)
        out = stepper.integrate(ReducedRhs{q, &field}, w.start, w.end, y, observer);
    else
        out = stepper.integrate(Full10Rhs{q, &field}, w.start, w.end, y, observer);
    raise_on_failure(out, q);
    if (final_state)
        *final_state = y;
    return {distribution(y, q, field, settings.formulation, w.end), out.stats};
}

} // namespace detail

/// Asymptotic distribution f(q, t_end) starting from vacuum at t_start.
inline double integrate_mode(const Vec3 &q, const PulseField &field, const SolverSettings &settings = {}) {
    return detail::run_mode(q, field, settings, [](const auto &) {}).f;
}

/// As integrate_mode, also reporting step statistics.
inline ModeResult integrate_mode_detailed(const Vec3 &q, const PulseField &field, const SolverSettings &settings = {}) {
    return detail::run_mode(q, field, settings, [](const auto &) {});
}

struct TrajectorySample {
    double t;
    double f;
};

/// f(t) at the requested (sorted, in-window) times from the solver's dense output.
inline std::vector<TrajectorySample> integrate_mode_trajectory(const Vec3 &q, const PulseField &field,
                                                               const SolverSettings &settings,
                                                               std::span<const double> sample_times) {
    const TimeWindow w = field.window();
    if (!std::is_sorted(sample_times.begin(), sample_times.end()))
        throw ConfigError("sample_times", "must be sorted");
    for (double t : sample_times)
        if (!field.potential().contains(t))
            throw WindowRangeError(t, w.start, w.end);

    std::vector<TrajectorySample> out;
    out.reserve(sample_times.size());
    std::size_t next = 0;
    const Formulation form = settings.formulation;
    const Vector10 y0 = detail::initial_state(q, field, form);
    while (next < sample_times.size() && sample_times[next] <= w.start)
        out.push_back({sample_times[next++], detail::distribution(y0, q, field, form, w.start)});

    detail::run_mode(q, field, settings, [&](const auto &step) {
        while (next < sample_times.size() && sample_times[next] <= step.t_new()) {
            const double t = sample_times[next++];
            const Vector10 y = t >= step.t_new() ? step.y_new() : step.dense(t);
            out.push_back({t, detail::distribution(y, q, field, form, std::min(t, w.end))});
        }
    });
    return out;
}

/// Integrates the ten-component system and reports the largest deviation of
/// s^2+|v|^2+|a|^2+|t1|^2 from 4 over the accepted steps.
inline double full10_norm_drift(const Vec3 &q, const PulseField &field, SolverSettings settings = {}) {
    settings.formulation = Formulation::Full10;
    double worst = 0.0;
    detail::run_mode(q, field, settings, [&](const auto &step) {
        worst = std::max(worst, std::abs(WignerState10{step.y_new()}.norm_squared() - 4.0));
    });
    return worst;
}

} // namespace pairgen
