#pragma once

// Multiphoton analytics (effective mass, ring radii) and feature extraction
// on computed spectra.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "pairgen/errors.hpp"
#include "pairgen/field.hpp"
#include "pairgen/spectrum.hpp"

namespace pairgen {

/// Field-dressed mass m* = sqrt(1 + (E0/(E_cr omega))^2 / 2), in units of m.
inline double effective_mass(const FieldConfig &cfg) {
    if (!(cfg.omega > 0.0))
        throw ConfigError("omega", "effective mass is undefined for omega = 0");
    const double ratio = cfg.e0_over_ecr / cfg.omega;
    return std::sqrt(1.0 + 0.5 * ratio * ratio);
}

/// Smallest photon order n with n omega >= 2 m*.
inline int threshold_order(const FieldConfig &cfg) {
    const double m_star = effective_mass(cfg);
    int n = static_cast<int>(std::ceil(2.0 * m_star / cfg.omega - 1e-12));
    while (n > 1 && (n - 1) * cfg.omega >= 2.0 * m_star)
        --n;
    while (n * cfg.omega < 2.0 * m_star * (1.0 - 1e-15))
        ++n;
    return std::max(n, 1);
}

/// Ring radius q_n = [(n omega / 2)^2 - m^2 - (E0/(E_cr omega))^2 / 2]^(1/2).
inline double ring_radius_analytic(int order, const FieldConfig &cfg) {
    if (!(cfg.omega > 0.0))
        throw ConfigError("omega", "ring radius is undefined for omega = 0");
    const double half = 0.5 * order * cfg.omega;
    const double ratio = cfg.e0_over_ecr / cfg.omega;
    const double arg = half * half - 1.0 - 0.5 * ratio * ratio;
    if (arg < -1e-12 * half * half)
        throw NoRealSolution(order, threshold_order(cfg));
    return std::sqrt(std::max(arg, 0.0));
}

/// Same radius obtained by root-finding on n omega = 2 sqrt(m*^2 + q^2).
inline double ring_radius_energy_conservation(int order, const FieldConfig &cfg) {
    const double m_star = effective_mass(cfg);
    const double photon_energy = order * cfg.omega;
    auto mismatch = [&](double q) { return 2.0 * std::sqrt(m_star * m_star + q * q) - photon_energy; };
    if (mismatch(0.0) > 1e-12 * photon_energy)
        throw NoRealSolution(order, threshold_order(cfg));
    if (mismatch(0.0) >= 0.0)
        return 0.0;
    const double hi = 0.5 * photon_energy;
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(mismatch, 0.0, hi, mismatch(0.0), mismatch(hi),
                                                          boost::math::tools::eps_tolerance<double>(52), iterations);
    return 0.5 * (a + b);
}

struct RingReport {
    int order = 0;
    double analytic_radius = 0.0;
    std::optional<double> detected_radius; ///< empty on a detection miss
    double detection_prominence = 0.0;     ///< (peak - higher flanking minimum) / peak
};

struct RadialProfile {
    double bin_width = 0.0;
    std::vector<double> mean; ///< mean f of nodes with |q| nearest to k * bin_width
    std::vector<std::size_t> count;
};

/// Angle-averaged profile over all grid nodes, binned by in-plane |q|. Only
/// bins whose circle lies fully inside the grid are kept when the grid
/// contains the origin.
inline RadialProfile radial_profile(const SpectrumField &spec) {
    const MomentumGrid &g = spec.grid;
    RadialProfile prof;
    prof.bin_width = std::min(g.dx(), g.dy());
    double r_max = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.ny; ++j)
            r_max = std::max(r_max, std::hypot(g.qx(i), g.qy(j)));
    if (g.qx_min <= 0.0 && g.qx_max >= 0.0 && g.qy_min <= 0.0 && g.qy_max >= 0.0)
        r_max = std::min({-g.qx_min, g.qx_max, -g.qy_min, g.qy_max});
    const auto bins = static_cast<std::size_t>(std::floor(r_max / prof.bin_width + 0.5)) + 1;
    std::vector<double> sum(bins, 0.0);
    prof.count.assign(bins, 0);
    for (std::size_t i = 0; i < g.nx; ++i) {
        for (std::size_t j = 0; j < g.ny; ++j) {
            const double r = std::hypot(g.qx(i), g.qy(j));
            const auto k = static_cast<std::size_t>(std::floor(r / prof.bin_width + 0.5));
            if (k < bins && r <= r_max + 1e-12) {
                sum[k] += spec.at(i, j);
                ++prof.count[k];
            }
        }
    }
    prof.mean.assign(bins, 0.0);
    for (std::size_t k = 0; k < bins; ++k)
        prof.mean[k] = prof.count[k] ? sum[k] / static_cast<double>(prof.count[k]) : 0.0;
    // Drop trailing empty bins.
    while (!prof.mean.empty() && prof.count.back() == 0) {
        prof.mean.pop_back();
        prof.count.pop_back();
    }
    return prof;
}

struct ProfilePeak {
    double radius;
    double value;
    double prominence;
};

/// Local maxima of a radial profile, each refined by a three-bin parabola.
inline std::vector<ProfilePeak> profile_peaks(const RadialProfile &prof) {
    const auto &y = prof.mean;
    std::vector<ProfilePeak> peaks;
    for (std::size_t k = 1; k + 1 < y.size(); ++k) {
        if (!(y[k] > y[k - 1] && y[k] >= y[k + 1]))
            continue;
        const double curvature = y[k - 1] - 2.0 * y[k] + y[k + 1];
        const double offset = curvature != 0.0 ? 0.5 * (y[k - 1] - y[k + 1]) / curvature : 0.0;
        std::size_t left = k;
        while (left > 0 && y[left - 1] <= y[left])
            --left;
        std::size_t right = k;
        while (right + 1 < y.size() && y[right + 1] <= y[right])
            ++right;
        const double base = std::max(y[left], y[right]);
        const double prominence = y[k] > 0.0 ? (y[k] - base) / y[k] : 0.0;
        peaks.push_back({(static_cast<double>(k) + std::clamp(offset, -0.5, 0.5)) * prof.bin_width, y[k], prominence});
    }
    return peaks;
}

/// Matches radial-profile maxima to the analytic n-photon radii; a ring is
/// detected when a maximum lies within three bins of its analytic radius.
inline std::vector<RingReport> detect_rings(const SpectrumField &spec, std::span<const int> orders) {
    const RadialProfile prof = radial_profile(spec);
    const std::vector<ProfilePeak> peaks = profile_peaks(prof);
    std::vector<RingReport> reports;
    for (int n : orders) {
        RingReport r;
        r.order = n;
        r.analytic_radius = ring_radius_analytic(n, spec.field);
        const ProfilePeak *best = nullptr;
        for (const auto &p : peaks)
            if (!best || std::abs(p.radius - r.analytic_radius) < std::abs(best->radius - r.analytic_radius))
                best = &p;
        if (best && std::abs(best->radius - r.analytic_radius) <= 3.0 * prof.bin_width) {
            r.detected_radius = best->radius;
            r.detection_prominence = best->prominence;
        }
        reports.push_back(r);
    }
    return reports;
}

struct SpectrumFeatures {
    double peak_qx = 0.0;
    double peak_qy = 0.0;
    double peak_value = 0.0;
    double asymmetry_y = 0.0; ///< NaN when the q_y range is not symmetric about 0
    int lobe_count_y = 0;
};

inline bool mirror_symmetric_y(const MomentumGrid &g) {
    return std::abs(g.qy_min + g.qy_max) <= 1e-12 * std::max(1.0, g.qy_max - g.qy_min);
}

/// Sum |f(qx,qy) - f(qx,-qy)| / sum f over mirror-paired nodes.
inline double asymmetry_y(const SpectrumField &spec) {
    const MomentumGrid &g = spec.grid;
    if (!mirror_symmetric_y(g))
        return std::numeric_limits<double>::quiet_NaN();
    double diff = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        for (std::size_t j = 0; j < g.ny; ++j) {
            diff += std::abs(spec.at(i, j) - spec.at(i, g.ny - 1 - j));
            total += spec.at(i, j);
        }
    }
    return total > 0.0 ? diff / total : 0.0;
}

/// Number of maximal runs above half the global maximum along the q_y column through the peak.
inline int lobe_count_y(const SpectrumField &spec, std::size_t peak_ix) {
    const MomentumGrid &g = spec.grid;
    const double level = 0.5 * *std::max_element(spec.values.begin(), spec.values.end());
    int runs = 0;
    bool inside = false;
    for (std::size_t j = 0; j < g.ny; ++j) {
        const bool above = spec.at(peak_ix, j) > level;
        if (above && !inside)
            ++runs;
        inside = above;
    }
    return runs;
}

inline SpectrumFeatures spectrum_features(const SpectrumField &spec) {
    const auto it = std::max_element(spec.values.begin(), spec.values.end());
    if (it == spec.values.end() || !(*it > 0.0))
        throw EmptySpectrum("spectrum has no positive values");
    const auto index = static_cast<std::size_t>(it - spec.values.begin());
    const std::size_t i = index / spec.grid.ny;
    const std::size_t j = index % spec.grid.ny;
    SpectrumFeatures out;
    out.peak_qx = spec.grid.qx(i);
    out.peak_qy = spec.grid.qy(j);
    out.peak_value = *it;
    out.asymmetry_y = asymmetry_y(spec);
    out.lobe_count_y = lobe_count_y(spec, i);
    return out;
}

} // namespace pairgen
