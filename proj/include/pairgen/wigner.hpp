#pragma once

// Phase-space state of one momentum mode and the right-hand sides of the
// ten-component equations and of the stabilized (f, w9) system.
//
// With p = q - eA(t) and m = 1 the ten-component system reads
//     s'  =  2 p.t1
//     v'  = -2 p x a - 2 t1
//     a'  = -2 p x v
//     t1' = -2 p s + 2 v
// The generator is antisymmetric, so |w|^2 is conserved. Writing
// w = 2(f-1) e1 + F w9 with e1 = (1, p)/Omega and F w9 = (-p.wv, wv, wa, wt)
// turns it into
//     f'  = E.wv / (2 Omega)
//     wv' = -p (E.wv)/Omega^2 - 2 p x wa - 2 wt + 2(1-f) (E/Omega - p (p.E)/Omega^3)
//     wa' = -2 p x wv
//     wt' =  2 wv + 2 p (p.wv)

#include <array>
#include <cmath>

#include "pairgen/field.hpp"
#include "pairgen/vec3.hpp"

namespace pairgen {

using Vector10 = std::array<double, 10>;

namespace detail {
inline Vec3 slot(const Vector10 &d, int first) noexcept { return {d[first], d[first + 1], d[first + 2]}; }
inline void put(Vector10 &d, int first, const Vec3 &v) noexcept {
    d[first] = v.x;
    d[first + 1] = v.y;
    d[first + 2] = v.z;
}
} // namespace detail

/// The ten nontrivial Wigner components (s, v, a, t1), stored contiguously.
struct WignerState10 {
    Vector10 data{};

    static WignerState10 from_parts(double s, const Vec3 &v, const Vec3 &a, const Vec3 &t1) noexcept {
        WignerState10 w;
        w.data[0] = s;
        detail::put(w.data, 1, v);
        detail::put(w.data, 4, a);
        detail::put(w.data, 7, t1);
        return w;
    }

    double s() const noexcept { return data[0]; }
    Vec3 v() const noexcept { return detail::slot(data, 1); }
    Vec3 a() const noexcept { return detail::slot(data, 4); }
    Vec3 t1() const noexcept { return detail::slot(data, 7); }

    /// s^2 + |v|^2 + |a|^2 + |t1|^2; equals 4 along trajectories from vacuum.
    double norm_squared() const noexcept {
        double acc = 0.0;
        for (double c : data)
            acc += c * c;
        return acc;
    }
};

/// Stabilized state: the distribution f followed by w9 = (wv, wa, wt).
struct ReducedModeState {
    Vector10 data{};

    static ReducedModeState from_parts(double f, const Vec3 &wv, const Vec3 &wa, const Vec3 &wt) noexcept {
        ReducedModeState r;
        r.data[0] = f;
        detail::put(r.data, 1, wv);
        detail::put(r.data, 4, wa);
        detail::put(r.data, 7, wt);
        return r;
    }

    double f() const noexcept { return data[0]; }
    Vec3 wv() const noexcept { return detail::slot(data, 1); }
    Vec3 wa() const noexcept { return detail::slot(data, 4); }
    Vec3 wt() const noexcept { return detail::slot(data, 7); }
};

/// A canonical momentum together with the (shared, read-only) pulse.
struct ModeContext {
    Vec3 q;
    const PulseField *field = nullptr;

    /// Kinetic momentum p = q - eA(t).
    Vec3 kinetic(double t) const { return q - field->vector_potential(t); }
    Vec3 electric(double t) const noexcept { return field->electric(t); }
};

inline double omega_energy(const Vec3 &p) noexcept { return std::sqrt(1.0 + dot(p, p)); }

inline WignerState10 vacuum_state(const Vec3 &p) noexcept {
    const double inv = 1.0 / omega_energy(p);
    return WignerState10::from_parts(-2.0 * inv, -2.0 * inv * p, {}, {});
}

inline WignerState10 vacuum_state(const ModeContext &ctx, double t) { return vacuum_state(ctx.kinetic(t)); }

/// Unit basis vector e1 = -w_vac / 2.
inline Vector10 basis_e1(const Vec3 &p) noexcept {
    const double inv = 1.0 / omega_energy(p);
    Vector10 e{};
    e[0] = inv;
    detail::put(e, 1, inv * p);
    return e;
}

inline Vector10 basis_e1(const ModeContext &ctx, double t) { return basis_e1(ctx.kinetic(t)); }

/// Time derivative of e1 given p and dp/dt = eE.
inline Vector10 e1_dot(const Vec3 &p, const Vec3 &e_field) noexcept {
    const double omega = omega_energy(p);
    const double inv = 1.0 / omega;
    const double inv3 = inv * inv * inv;
    const double pe = dot(p, e_field);
    Vector10 d{};
    d[0] = -pe * inv3;
    detail::put(d, 1, inv * e_field - (pe * inv3) * p);
    return d;
}

inline Vector10 e1_dot(const ModeContext &ctx, double t) { return e1_dot(ctx.kinetic(t), ctx.electric(t)); }

/// The product (1/2) e1_dot^T F w9 evaluated without simplification.
inline double f_rate_unsimplified(const ReducedModeState &state, const Vec3 &p, const Vec3 &e_field) noexcept {
    const Vector10 d = e1_dot(p, e_field);
    const Vec3 wv = state.wv();
    double acc = d[0] * (-dot(p, wv));
    for (int i = 1; i < 10; ++i)
        acc += d[i] * state.data[i];
    return 0.5 * acc;
}

inline ReducedModeState rhs_reduced(const ReducedModeState &state, const Vec3 &p, const Vec3 &e_field) noexcept {
    const double omega2 = 1.0 + dot(p, p);
    const double omega = std::sqrt(omega2);
    const double inv = 1.0 / omega;
    const double f = state.f();
    const Vec3 wv = state.wv();
    const Vec3 wa = state.wa();
    const Vec3 wt = state.wt();

    const double ew = dot(e_field, wv);
    const double pe = dot(p, e_field);
    const double pw = dot(p, wv);
    const Vec3 e1dot_vec = inv * e_field - (pe * inv * inv * inv) * p;

    const Vec3 dwv = (-ew / omega2) * p - 2.0 * cross(p, wa) - 2.0 * wt + (2.0 * (1.0 - f)) * e1dot_vec;
    const Vec3 dwa = -2.0 * cross(p, wv);
    const Vec3 dwt = 2.0 * wv + (2.0 * pw) * p;
    return ReducedModeState::from_parts(0.5 * ew * inv, dwv, dwa, dwt);
}

inline ReducedModeState rhs_reduced(const ReducedModeState &state, const ModeContext &ctx, double t) {
    return rhs_reduced(state, ctx.kinetic(t), ctx.electric(t));
}

inline WignerState10 rhs_full10(const WignerState10 &w, const Vec3 &p) noexcept {
    const double s = w.s();
    const Vec3 v = w.v();
    const Vec3 a = w.a();
    const Vec3 t1 = w.t1();
    return WignerState10::from_parts(2.0 * dot(p, t1), -2.0 * cross(p, a) - 2.0 * t1, -2.0 * cross(p, v),
                                     -2.0 * s * p + 2.0 * v);
}

inline WignerState10 rhs_full10(const WignerState10 &w, const ModeContext &ctx, double t) {
    return rhs_full10(w, ctx.kinetic(t));
}

/// f = (1/2) e1^T (w - w_vac) = 1 + (1/2) e1^T w.
inline double distribution_from_state10(const WignerState10 &w, const Vec3 &p) noexcept {
    const Vector10 e = basis_e1(p);
    const WignerState10 vac = vacuum_state(p);
    double acc = 0.0;
    for (int i = 0; i < 10; ++i)
        acc += e[i] * (w.data[i] - vac.data[i]);
    return 0.5 * acc;
}

inline double distribution_from_state10(const WignerState10 &w, const ModeContext &ctx, double t) {
    return distribution_from_state10(w, ctx.kinetic(t));
}

/// w = 2(f-1) e1 + F w9.
inline WignerState10 compose_state10(const ReducedModeState &r, const Vec3 &p) noexcept {
    const Vector10 e = basis_e1(p);
    WignerState10 w;
    for (int i = 0; i < 10; ++i)
        w.data[i] = 2.0 * (r.f() - 1.0) * e[i];
    w.data[0] -= dot(p, r.wv());
    for (int i = 1; i < 10; ++i)
        w.data[i] += r.data[i];
    return w;
}

} // namespace pairgen
