#pragma once

// Elliptically polarized Gaussian pulse and its tabulated vector potential.
//
// Units: the electron mass is the unit (m = 1). Times are in 1/m, momenta and
// frequencies in m. Fields are stored as eE/m^2 = E/E_cr and potentials as
// eA/m, so the coupling never appears explicitly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pairgen/errors.hpp"
#include "pairgen/vec3.hpp"

namespace pairgen {

struct FieldConfig {
    double e0_over_ecr = 0.1 * std::sqrt(2.0);
    double tau = 100.0;
    double omega = 0.05;
    double phi = 0.0;
    double delta = 0.0;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const {
        if (!std::isfinite(e0_over_ecr) || e0_over_ecr < 0.0)
            throw ConfigError("e0_over_ecr", "must be finite and >= 0");
        if (!std::isfinite(tau) || tau <= 0.0)
            throw ConfigError("tau", "must be finite and > 0");
        if (!std::isfinite(omega) || omega < 0.0)
            throw ConfigError("omega", "must be finite and >= 0");
        if (!std::isfinite(phi))
            throw ConfigError("phi", "must be finite");
        if (!std::isfinite(delta) || std::abs(delta) > 1.0)
            throw ConfigError("delta", "polarization must satisfy |delta| <= 1");
    }

    /// Amplitude of each field component, E0/sqrt(1+delta^2).
    double peak_amplitude() const noexcept { return e0_over_ecr / std::sqrt(1.0 + delta * delta); }

    /// Number of carrier cycles scale, omega * tau.
    double sigma() const noexcept { return omega * tau; }

    friend bool operator==(const FieldConfig &, const FieldConfig &) = default;
};

inline Vec3 electric_field(double t, const FieldConfig &cfg) noexcept {
    const double envelope = cfg.peak_amplitude() * std::exp(-t * t / (2.0 * cfg.tau * cfg.tau));
    const double phase = cfg.omega * t + cfg.phi;
    return {envelope * std::cos(phase), envelope * cfg.delta * std::sin(phase), 0.0};
}

/// Keldysh parameter computed from the per-component peak amplitude.
inline double keldysh(const FieldConfig &cfg) {
    if (!(cfg.e0_over_ecr > 0.0))
        throw ConfigError("e0_over_ecr", "Keldysh parameter needs a nonzero field");
    return cfg.omega / cfg.peak_amplitude();
}

struct TimeWindow {
    double start;
    double end;
};

/// Symmetric window whose edges sit where the Gaussian envelope equals `envelope_floor`.
inline TimeWindow integration_window(const FieldConfig &cfg, double envelope_floor = 1e-8) {
    if (!(envelope_floor > 0.0 && envelope_floor < 1.0))
        throw ConfigError("envelope_floor", "must lie in (0, 1)");
    const double half = cfg.tau * std::sqrt(2.0 * std::log(1.0 / envelope_floor));
    return {-half, half};
}

/// Piecewise-cubic Hermite table of eA(t)/m on a uniform knot grid.
///
/// Knot values come from compensated cumulative Gauss-Kronrod quadrature of
/// -eE; knot slopes are the exact -eE. The step is halved until the
/// interpolant matches an adaptive quadrature at every interval midpoint to
/// `tolerance()`. Immutable after construction.
class PotentialInterpolant {
  public:
    PotentialInterpolant(const FieldConfig &cfg, TimeWindow window)
        : t_start_(window.start), t_end_(window.end),
          tolerance_(1e-12 * std::max(1.0, cfg.e0_over_ecr * cfg.tau)) {
        cfg.validate();
        if (!(window.end > window.start))
            throw ConfigError("window", "end must exceed start");
        const double span = t_end_ - t_start_;
        // Hermite error ~ h^4/384 * max|E'''|; start from that estimate.
        const double rate = cfg.omega + 3.0 / cfg.tau;
        const double third = std::max(cfg.peak_amplitude() * rate * rate * rate, 1e-300);
        double h = std::min({std::pow(384.0 * tolerance_ / third, 0.25), cfg.tau / 4.0, span / 2.0});
        for (int pass = 0; pass < 12; ++pass) {
            tabulate(cfg, static_cast<std::size_t>(std::ceil(span / h)));
            if (max_midpoint_error(cfg) <= tolerance_)
                return;
            h = step_ / 2.0;
        }
        throw NumericalFailure("vector potential table did not reach tolerance", {}, t_start_);
    }

    double t_start() const noexcept { return t_start_; }
    double t_end() const noexcept { return t_end_; }
    double step() const noexcept { return step_; }
    double tolerance() const noexcept { return tolerance_; }
    std::size_t knot_count() const noexcept { return values_.size(); }
    double knot(std::size_t i) const noexcept { return t_start_ + static_cast<double>(i) * step_; }
    const Vec3 &knot_value(std::size_t i) const noexcept { return values_[i]; }
    const Vec3 &knot_slope(std::size_t i) const noexcept { return slopes_[i]; }

    /// Largest |eA/m| over the knots.
    double max_norm() const noexcept {
        double m = 0.0;
        for (const Vec3 &v : values_)
            m = std::max(m, norm(v));
        return m;
    }

    bool contains(double t) const noexcept {
        const double slack = 1e-9 * step_;
        return t >= t_start_ - slack && t <= t_end_ + slack;
    }

    /// eA(t)/m; throws WindowRangeError outside the window.
    Vec3 operator()(double t) const {
        if (!contains(t))
            throw WindowRangeError(t, t_start_, t_end_);
        return evaluate(t);
    }

    /// Derivative of the interpolant, -eE/m^2 at knots.
    Vec3 derivative(double t) const {
        if (!contains(t))
            throw WindowRangeError(t, t_start_, t_end_);
        const auto [i, s] = locate(t);
        const double s2 = s * s;
        const double d00 = (6.0 * s2 - 6.0 * s) / step_;
        const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
        const double d01 = -d00;
        const double d11 = 3.0 * s2 - 2.0 * s;
        return d00 * values_[i] + d10 * slopes_[i] + d01 * values_[i + 1] + d11 * slopes_[i + 1];
    }

  private:
    std::pair<std::size_t, double> locate(double t) const noexcept {
        const double u = (t - t_start_) / step_;
        const auto last = values_.size() - 2;
        auto i = static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(last)));
        i = std::min(i, last);
        return {i, u - static_cast<double>(i)};
    }

    Vec3 evaluate(double t) const noexcept {
        const auto [i, s] = locate(t);
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = (s3 - 2.0 * s2 + s) * step_;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = (s3 - s2) * step_;
        return h00 * values_[i] + h10 * slopes_[i] + h01 * values_[i + 1] + h11 * slopes_[i + 1];
    }

    static double quad(auto &&g, double a, double b, unsigned depth) {
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, a, b, depth, 1e-14);
    }

    // Integral of -eE over [a, b].
    static Vec3 minus_field_integral(const FieldConfig &cfg, double a, double b, unsigned depth) {
        Vec3 r;
        r.x = -quad([&](double t) { return electric_field(t, cfg).x; }, a, b, depth);
        if (cfg.delta != 0.0)
            r.y = -quad([&](double t) { return electric_field(t, cfg).y; }, a, b, depth);
        return r;
    }

    void tabulate(const FieldConfig &cfg, std::size_t intervals) {
        intervals = std::max<std::size_t>(intervals, 2);
        step_ = (t_end_ - t_start_) / static_cast<double>(intervals);
        values_.assign(intervals + 1, Vec3{});
        slopes_.assign(intervals + 1, Vec3{});
        Vec3 sum;
        Vec3 carry;
        // Neumaier summation per component keeps the running integral exact to O(eps).
        auto add = [](double &s, double &c, double v) {
            const double t = s + v;
            c += (std::abs(s) >= std::abs(v)) ? (s - t) + v : (v - t) + s;
            s = t;
        };
        for (std::size_t i = 0; i <= intervals; ++i) {
            if (i > 0) {
                const Vec3 piece = minus_field_integral(cfg, knot(i - 1), knot(i), 0);
                add(sum.x, carry.x, piece.x);
                add(sum.y, carry.y, piece.y);
                add(sum.z, carry.z, piece.z);
            }
            values_[i] = sum + carry;
            slopes_[i] = -electric_field(knot(i), cfg);
        }
    }

    double max_midpoint_error(const FieldConfig &cfg) const {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
            const double mid = knot(i) + 0.5 * step_;
            const Vec3 ref = values_[i] + minus_field_integral(cfg, knot(i), mid, 3);
            const Vec3 d = evaluate(mid) - ref;
            worst = std::max({worst, std::abs(d.x), std::abs(d.y), std::abs(d.z)});
        }
        return worst;
    }

    double t_start_;
    double t_end_;
    double tolerance_;
    double step_ = 0.0;
    std::vector<Vec3> values_;
    std::vector<Vec3> slopes_;
};

/// A pulse together with its integration window and tabulated potential.
/// Shared read-only by every mode of a sweep.
class PulseField {
  public:
    explicit PulseField(const FieldConfig &cfg, double envelope_floor = 1e-8)
        : cfg_((cfg.validate(), cfg)), window_(integration_window(cfg, envelope_floor)),
          potential_(cfg, window_) {}

    const FieldConfig &config() const noexcept { return cfg_; }
    TimeWindow window() const noexcept { return window_; }
    const PotentialInterpolant &potential() const noexcept { return potential_; }

    Vec3 electric(double t) const noexcept { return electric_field(t, cfg_); }
    Vec3 vector_potential(double t) const { return potential_(t); }

  private:
    FieldConfig cfg_;
    TimeWindow window_;
    PotentialInterpolant potential_;
};

inline Vec3 vector_potential(double t, const PotentialInterpolant &interp) { return interp(t); }

} // namespace pairgen
