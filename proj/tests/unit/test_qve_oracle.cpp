#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pairgen/qve_oracle.hpp"
#include "pairgen/validation.hpp"

using namespace pairgen;

namespace {

const PulseField &few_cycle_field() {
    static const PulseField field(few_cycle_linear_field());
    return field;
}

} // namespace

TEST(QveOracle, NullFieldGivesZero) {
    FieldConfig c = few_cycle_linear_field();
    c.e0_over_ecr = 0.0;
    const PulseField field(c);
    for (const Vec3 &q : random_modes(5, 1.0, 31))
        EXPECT_EQ(integrate_qve(q, field), 0.0);
}

TEST(QveOracle, AgreesWithReducedDhw) {
    for (const Vec3 &q : random_modes(15, 1.0, 32))
        EXPECT_NEAR(integrate_qve(q, few_cycle_field()), integrate_mode(q, few_cycle_field()), 1e-6);
    FieldConfig c = few_cycle_linear_field();
    c.omega = 0.5;
    const PulseField multiphoton(c);
    for (const Vec3 &q : random_modes(5, 1.0, 33))
        EXPECT_NEAR(integrate_qve(q, multiphoton), integrate_mode(q, multiphoton), 1e-6);
}

TEST(QveOracle, InvariantUnderTransverseRotation) {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (const Vec3 &q : random_modes(5, 1.0, 35)) {
        const double perp = std::hypot(q.y, q.z);
        const double a = angle(rng);
        const Vec3 rotated{q.x, perp * std::cos(a), perp * std::sin(a)};
        EXPECT_NEAR(integrate_qve(q, few_cycle_field()), integrate_qve(rotated, few_cycle_field()), 1e-12);
    }
}

TEST(QveOracle, FinalOccupationWithinTwoLevelBound) {
    for (const Vec3 &q : random_modes(10, 1.0, 36)) {
        const double f = integrate_qve(q, few_cycle_field());
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 2.0);
    }
}

TEST(QveOracle, RejectsEllipticalPolarization) {
    FieldConfig c = few_cycle_linear_field();
    c.delta = 0.5;
    const PulseField field(c);
    EXPECT_THROW(integrate_qve({0.1, 0.0, 0.0}, field), UnsupportedConfiguration);
}
