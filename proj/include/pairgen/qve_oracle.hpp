#pragma once

// Reference solver for linearly polarized pulses (delta = 0): the quantum
// Vlasov equation in its three-variable form,
//     f' = W u / 2,  u' = W (1 - 2f) - 2 Omega v,  v' = 2 Omega u,
// with W = eE eps_perp / Omega^2, eps_perp^2 = 1 + q_perp^2 and
// Omega^2 = eps_perp^2 + (q_par - eA)^2. Shares no right-hand-side code with
// the Wigner formulations.
//
// The QVE f is the occupation of one spin state (0 <= f <= 1); the Wigner f is
// summed over both spins, so integrate_qve reports 2 f.

#include <array>
#include <cmath>

#include "pairgen/dop853.hpp"
#include "pairgen/errors.hpp"
#include "pairgen/field.hpp"
#include "pairgen/mode_solver.hpp"

namespace pairgen {

struct QveState {
    double f = 0.0;
    double u = 0.0;
    double v = 0.0;
};

namespace detail {
struct QveRhs {
    double q_par;
    double eps_perp2;
    const PulseField *field;
    void operator()(double t, const std::array<double, 3> &y, std::array<double, 3> &dy) const {
        const double e = field->electric(t).x;
        const double p_par = q_par - field->vector_potential(t).x;
        const double omega2 = eps_perp2 + p_par * p_par;
        const double omega = std::sqrt(omega2);
        const double w = e * std::sqrt(eps_perp2) / omega2;
        dy[0] = 0.5 * w * y[1];
        dy[1] = w * (1.0 - 2.0 * y[0]) - 2.0 * omega * y[2];
        dy[2] = 2.0 * omega * y[1];
    }
};
} // namespace detail

/// Final per-spin QVE state at the end of the window; throws UnsupportedConfiguration for delta != 0.
inline QveState integrate_qve_state(const Vec3 &q, const PulseField &field, const SolverSettings &settings = {}) {
    if (field.config().delta != 0.0)
        throw UnsupportedConfiguration("quantum Vlasov oracle requires a linearly polarized pulse (delta = 0)");
    settings.validate();
    ode::Dop853<3> stepper(detail::step_control(q, field, settings));
    std::array<double, 3> y{};
    const TimeWindow w = field.window();
    const detail::QveRhs rhs{q.x, 1.0 + q.y * q.y + q.z * q.z, &field};
    detail::raise_on_failure(stepper.integrate(rhs, w.start, w.end, y), q);
    return {y[0], y[1], y[2]};
}

/// Spin-summed asymptotic distribution, comparable with integrate_mode.
inline double integrate_qve(const Vec3 &q, const PulseField &field, const SolverSettings &settings = {}) {
    return 2.0 * integrate_qve_state(q, field, settings).f;
}

} // namespace pairgen
