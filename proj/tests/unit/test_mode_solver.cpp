#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pairgen/mode_solver.hpp"
#include "pairgen/validation.hpp"

using namespace pairgen;

namespace {

FieldConfig multiphoton() {
    FieldConfig c;
    c.omega = 0.5;
    return c;
}

const PulseField &few_cycle_field() {
    static const PulseField field(few_cycle_linear_field());
    return field;
}

const PulseField &multiphoton_field() {
    static const PulseField field(multiphoton());
    return field;
}

} // namespace

TEST(SolverSettings, Validation) {
    SolverSettings s;
    EXPECT_NO_THROW(s.validate());
    s.rel_tol = 1e-2;
    EXPECT_THROW(s.validate(), ConfigError);
    s = {};
    s.abs_tol = 0.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = {};
    s.max_steps = 9999;
    EXPECT_THROW(s.validate(), ConfigError);
    EXPECT_EQ(formulation_from_string("full10"), Formulation::Full10);
    EXPECT_EQ(to_string(Formulation::Reduced), "reduced");
    EXPECT_THROW(formulation_from_string("ten"), ConfigError);
}

TEST(IntegrateMode, NullFieldLeavesVacuum) {
    FieldConfig c = few_cycle_linear_field();
    c.e0_over_ecr = 0.0;
    const PulseField field(c);
    for (const Vec3 &q : random_modes(10, 1.0, 21)) {
        EXPECT_NEAR(integrate_mode(q, field), 0.0, 1e-10);
        SolverSettings full;
        full.formulation = Formulation::Full10;
        EXPECT_NEAR(integrate_mode(q, field, full), 0.0, 1e-10);
    }
}

TEST(IntegrateMode, FivePhotonRingCrossesQxAxis) {
    const double q5 = 0.7228;
    const double h = 0.005;
    const double center = integrate_mode({q5, 0, 0}, multiphoton_field());
    EXPECT_GT(center, integrate_mode({q5 - h, 0, 0}, multiphoton_field()));
    EXPECT_GT(center, integrate_mode({q5 + h, 0, 0}, multiphoton_field()));
}

TEST(IntegrateMode, DualFormulationsAgree) {
    SolverSettings full;
    full.formulation = Formulation::Full10;
    for (const PulseField *field : {&few_cycle_field(), &multiphoton_field()}) {
        for (const Vec3 &q : random_modes(6, 1.0, 22)) {
            const double reduced = integrate_mode(q, *field);
            EXPECT_NEAR(reduced, integrate_mode(q, *field, full), 1e-6);
        }
    }
}

TEST(IntegrateMode, OccupationBounds) {
    const SolverSettings s;
    for (const PulseField *field : {&few_cycle_field(), &multiphoton_field()}) {
        for (const Vec3 &q : random_modes(20, 1.3, 23)) {
            const double f = integrate_mode(q, *field, s);
            EXPECT_GE(f, -s.abs_tol);
            EXPECT_LE(f, 2.0 + s.abs_tol);
        }
    }
}

TEST(IntegrateMode, ToleranceRefinementIsConverged) {
    SolverSettings coarse;
    SolverSettings fine;
    fine.rel_tol = coarse.rel_tol / 2.0;
    fine.abs_tol = coarse.abs_tol / 2.0;
    for (const Vec3 &q : random_modes(100, 1.0, 24)) {
        const double a = integrate_mode(q, few_cycle_field(), coarse);
        const double b = integrate_mode(q, few_cycle_field(), fine);
        EXPECT_LT(std::abs(a - b), 10.0 * fine.abs_tol) << "q=(" << q.x << "," << q.y << "," << q.z << ")";
    }
}

TEST(IntegrateMode, BitIdenticalReruns) {
    for (const Vec3 &q : random_modes(5, 1.0, 25)) {
        const ModeResult a = integrate_mode_detailed(q, multiphoton_field());
        const ModeResult b = integrate_mode_detailed(q, multiphoton_field());
        EXPECT_EQ(a.f, b.f);
        EXPECT_EQ(a.stats.accepted, b.stats.accepted);
        EXPECT_EQ(a.stats.rejected, b.stats.rejected);
    }
}

TEST(IntegrateMode, RejectsBadInput) {
    EXPECT_THROW(integrate_mode({std::nan(""), 0, 0}, few_cycle_field()), ConfigError);
    SolverSettings s;
    s.rel_tol = 0.5;
    EXPECT_THROW(integrate_mode({0, 0, 0}, few_cycle_field(), s), ConfigError);
}

TEST(IntegrateMode, StepBudgetExhaustionIsTyped) {
    FieldConfig c = multiphoton();
    c.tau = 1000.0;
    const PulseField field(c);
    SolverSettings s;
    s.max_steps = 10'000;
    try {
        integrate_mode({0.7, 0, 0}, field, s);
        FAIL() << "expected StepBudgetExhausted";
    } catch (const StepBudgetExhausted &e) {
        EXPECT_LT(e.time_reached(), field.window().end);
        EXPECT_EQ(e.momentum().x, 0.7);
    }
}

TEST(Trajectory, EndpointsAreConsistent) {
    const Vec3 q{0.3, 0.2, 0.0};
    const TimeWindow w = few_cycle_field().window();
    const SolverSettings s;
    const std::vector<double> start{w.start};
    const auto first = integrate_mode_trajectory(q, few_cycle_field(), s, start);
    ASSERT_EQ(first.size(), 1u);
    EXPECT_EQ(first[0].t, w.start);
    EXPECT_EQ(first[0].f, 0.0);

    const std::vector<double> end{w.end};
    const auto last = integrate_mode_trajectory(q, few_cycle_field(), s, end);
    ASSERT_EQ(last.size(), 1u);
    EXPECT_NEAR(last[0].f, integrate_mode(q, few_cycle_field(), s), 1e-15);
}

TEST(Trajectory, SettlesAfterThePulse) {
    const TimeWindow w = few_cycle_field().window();
    const double tau = few_cycle_field().config().tau;
    std::vector<double> times;
    for (int k = 0; k < 100; ++k)
        times.push_back(w.start + (w.end - w.start) * k / 99.0);
    for (const Vec3 &q : {Vec3{0.0, 0.0, 0.0}, Vec3{0.3, 0.2, 0.0}, Vec3{-0.5, 0.1, 0.0}}) {
        const auto trace = integrate_mode_trajectory(q, few_cycle_field(), SolverSettings{}, times);
        ASSERT_EQ(trace.size(), times.size());
        const double final_f = trace.back().f;
        ASSERT_GT(final_f, 0.0);
        // The envelope drops below 1e-6 of its peak beyond tau * sqrt(2 ln 1e6).
        const double settled = tau * std::sqrt(2.0 * std::log(1e6));
        for (const auto &sample : trace) {
            EXPECT_TRUE(std::isfinite(sample.f));
            if (sample.t > settled) {
                EXPECT_NEAR(sample.f, final_f, 0.01 * final_f) << "t=" << sample.t;
            }
        }
    }
}

TEST(Trajectory, RejectsUnsortedOrOutOfWindowTimes) {
    const TimeWindow w = few_cycle_field().window();
    const std::vector<double> unsorted{0.0, -1.0};
    EXPECT_THROW(integrate_mode_trajectory({0, 0, 0}, few_cycle_field(), {}, unsorted), ConfigError);
    const std::vector<double> outside{w.end + 10.0};
    EXPECT_THROW(integrate_mode_trajectory({0, 0, 0}, few_cycle_field(), {}, outside), WindowRangeError);
}

TEST(Conservation, Full10NormStaysAtFour) {
    for (const PulseField *field : {&few_cycle_field(), &multiphoton_field()})
        for (const Vec3 &q : random_modes(3, 1.0, 26))
            EXPECT_LE(full10_norm_drift(q, *field), 1e-8);
}
