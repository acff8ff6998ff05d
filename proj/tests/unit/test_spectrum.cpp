#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pairgen/spectrum.hpp"
#include "pairgen/validation.hpp"

using namespace pairgen;

namespace {

FieldConfig few_cycle(double delta) {
    FieldConfig c = few_cycle_linear_field();
    c.delta = delta;
    return c;
}

SpectrumField constant_spectrum(const MomentumGrid &g, double c) {
    SpectrumField s;
    s.grid = g;
    s.values.assign(g.size(), c);
    return s;
}

} // namespace

TEST(MomentumGrid, NodesAndValidation) {
    const MomentumGrid g = MomentumGrid::square(1.0, 21);
    EXPECT_EQ(g.size(), 441u);
    EXPECT_DOUBLE_EQ(g.dx(), 0.1);
    EXPECT_EQ(g.qx(0), -1.0);
    EXPECT_EQ(g.qx(20), 1.0);
    EXPECT_NEAR(g.qy(10), 0.0, 1e-15);
    MomentumGrid bad = g;
    bad.nx = 1;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = g;
    bad.qy_max = bad.qy_min;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(DensityPlane, ZeroAndConstantIntegrands) {
    MomentumGrid g{-0.5, 1.5, 17, -1.0, 0.25, 12, 0.0};
    EXPECT_EQ(number_density_plane(constant_spectrum(g, 0.0)), 0.0);
    const double c = 0.37;
    const double area = 2.0 * 1.25;
    EXPECT_NEAR(number_density_plane(constant_spectrum(g, c)), c * area / (4.0 * std::numbers::pi * std::numbers::pi),
                1e-15);
}

TEST(DensityPlane, ExactForBilinearIntegrands) {
    const MomentumGrid g{0.0, 1.0, 9, 0.0, 2.0, 5, 0.0};
    SpectrumField s = constant_spectrum(g, 0.0);
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.ny; ++j)
            s.at(i, j) = 1.0 + g.qx(i) + 2.0 * g.qy(j) + g.qx(i) * g.qy(j);
    // Integral of 1 + x + 2y + xy over [0,1]x[0,2] = 2 + 1 + 4 + 1.
    EXPECT_NEAR(number_density_plane(s), 8.0 / (4.0 * std::numbers::pi * std::numbers::pi), 1e-14);
}

TEST(ComputeSpectrum, NullFieldIsZero) {
    FieldConfig c = few_cycle(0.3);
    c.e0_over_ecr = 0.0;
    const SpectrumField s = compute_spectrum(MomentumGrid::square(1.0, 7), c, SolverSettings{});
    for (double v : s.values)
        EXPECT_NEAR(v, 0.0, SolverSettings{}.abs_tol);
}

TEST(ComputeSpectrum, LinearPolarizationIsMirrorSymmetric) {
    const SpectrumField s = compute_spectrum(MomentumGrid::square(1.0, 15), few_cycle(0.0), SolverSettings{});
    EXPECT_LE(mirror_defect_y(s), 1e-6);
    EXPECT_TRUE(check_mirror_symmetry(s).passed);
    EXPECT_GE(value_bounds(s).min, -SolverSettings{}.abs_tol);
}

TEST(ComputeSpectrum, EllipticalPeakLeavesTheQxAxis) {
    const SpectrumField s = compute_spectrum(MomentumGrid::square(1.0, 21), few_cycle(0.5), SolverSettings{});
    const auto it = std::max_element(s.values.begin(), s.values.end());
    const std::size_t j = static_cast<std::size_t>(it - s.values.begin()) % s.grid.ny;
    EXPECT_GT(std::abs(s.grid.qy(j)), 0.5 * s.grid.dy());
}

TEST(ComputeSpectrum, SchedulingInvariance) {
    const PulseField field(few_cycle(0.7));
    const MomentumGrid g = MomentumGrid::square(1.0, 11);
    const SpectrumField one = compute_spectrum(g, field, SolverSettings{}, SweepOptions{1});
    const SpectrumField three = compute_spectrum(g, field, SolverSettings{}, SweepOptions{3});
    const SpectrumField many = compute_spectrum(g, field, SolverSettings{}, SweepOptions{11});
    EXPECT_EQ(one.workers, 1u);
    EXPECT_EQ(three.workers, 3u);
    ASSERT_EQ(one.values.size(), three.values.size());
    for (std::size_t k = 0; k < one.values.size(); ++k) {
        EXPECT_EQ(one.values[k], three.values[k]);
        EXPECT_EQ(one.values[k], many.values[k]);
    }
    EXPECT_EQ(number_density_plane(one), number_density_plane(three));
}

TEST(ComputeSpectrum, FailureBudget) {
    FieldConfig c = few_cycle(0.0);
    c.omega = 0.5;
    c.tau = 1000.0;
    const PulseField field(c);
    SolverSettings s;
    s.max_steps = 10'000;
    const MomentumGrid g{0.6, 0.7, 2, -0.05, 0.05, 2, 0.0};
    EXPECT_THROW(compute_spectrum(g, field, s, SweepOptions{1, 0}), SweepFailure);
    const SpectrumField tolerated = compute_spectrum(g, field, s, SweepOptions{1, 4});
    ASSERT_EQ(tolerated.failures.size(), 4u);
    EXPECT_EQ(tolerated.failures.front().ix, 0u);
    for (double v : tolerated.values)
        EXPECT_TRUE(std::isnan(v));
}

TEST(ComputeSpectrum, GridRefinementStability) {
    const PulseField field(few_cycle(0.0));
    const double coarse = number_density_plane(compute_spectrum(MomentumGrid::square(1.0, 101), field, {}));
    const double fine = number_density_plane(compute_spectrum(MomentumGrid::square(1.0, 201), field, {}));
    EXPECT_LT(std::abs(fine - coarse), 0.01 * fine);
}
