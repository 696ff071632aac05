#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mhdlab/harmonic_measure.hpp"

using namespace mhdlab;

TEST(ExtremalMeasure, ClosedFormValues) {
    const double expected = 2.0 / std::numbers::pi * std::asin(0.6);
    EXPECT_NEAR(solynin_h(0.5), expected, 1e-15);
    EXPECT_NEAR(solynin_lower_bound(0.5), expected, 1e-15);
    EXPECT_NEAR(expected, 0.409666, 1e-6);
    EXPECT_LT(solynin_h(1.0 - 1e-9), 1e-6);
    EXPECT_GT(solynin_h(1e-9), 1.0 - 1e-6);
    EXPECT_LT(solynin_lower_bound(1e-9), 1e-6);
    EXPECT_GT(solynin_lower_bound(1.0 - 1e-9), 1.0 - 1e-6);
    for (double g : {0.1, 0.3, 0.7}) EXPECT_NEAR(solynin_lower_bound(g), solynin_h(1.0 - g), 1e-15);
    EXPECT_THROW(solynin_h(0.0), ParameterError);
    EXPECT_THROW(solynin_h(1.0), ParameterError);
    EXPECT_THROW(solynin_lower_bound(1.5), ParameterError);
}

TEST(ExtremalSlits, Geometry) {
    const auto k = extremal_slits(0.5, 1.0);
    ASSERT_EQ(k.intervals().size(), 2u);
    EXPECT_DOUBLE_EQ(k.intervals()[0].lo, -1.0);
    EXPECT_DOUBLE_EQ(k.intervals()[0].hi, -0.5);
    EXPECT_DOUBLE_EQ(k.intervals()[1].lo, 0.5);
    EXPECT_DOUBLE_EQ(k.intervals()[1].hi, 1.0);
    const auto k2 = extremal_slits(0.5, 2.0);
    EXPECT_DOUBLE_EQ(k2.intervals()[1].lo, 1.0);
    EXPECT_DOUBLE_EQ(k2.measure(), 2.0);
    const auto almost = extremal_slits(1.0 - 1e-12, 1.0);
    EXPECT_NEAR(almost.measure(), 2.0, 1e-11);
}

TEST(SlitSet, Validation) {
    EXPECT_THROW(SlitSet(1.0, {{0.5, 0.2}}), ParameterError);
    EXPECT_THROW(SlitSet(1.0, {{0.5, 1.5}}), ParameterError);
    EXPECT_THROW(SlitSet(1.0, {{0.2, 0.5}, {0.4, 0.6}}), ParameterError);
    EXPECT_THROW(SlitSet(0.0, {}), ParameterError);
    const SlitSet k(1.0, {{-0.8, -0.6}, {0.1, 0.3}});
    EXPECT_NEAR(k.measure(), 0.4, 1e-15);
    EXPECT_TRUE(k.contains(0.1));
    EXPECT_FALSE(k.contains(0.0));
    EXPECT_DOUBLE_EQ(k.distance(0.0, 0.0), 0.1);
    EXPECT_DOUBLE_EQ(k.distance(0.2, 0.5), 0.5);
}

TEST(MonteCarlo, EmptySetIsExactlyZero) {
    const auto est = mc_harmonic_measure(SlitSet(1.0, {}), {.walks = 50});
    EXPECT_EQ(est.mean, 0.0);
    EXPECT_EQ(est.hits_slits, 0u);
    EXPECT_EQ(est.circle_fraction(), 1.0);
}

TEST(MonteCarlo, Preconditions) {
    EXPECT_THROW(mc_harmonic_measure(SlitSet(1.0, {{-0.1, 0.1}})), PreconditionError);
    EXPECT_THROW(mc_harmonic_measure(SlitSet(1.0, {{0.0, 0.5}})), PreconditionError);
    EXPECT_THROW(mc_harmonic_measure(extremal_slits(0.5, 1.0), {.walks = 9999}), PreconditionError);
}

TEST(MonteCarlo, ExtremalConfigurationMatchesClosedForm) {
    for (double gamma : {0.25, 0.5, 0.75}) {
        const auto est = mc_harmonic_measure(extremal_slits(gamma, 1.0), {.walks = 200000, .seed = 7});
        EXPECT_NEAR(est.mean, solynin_lower_bound(gamma), 3.0 * est.standard_error) << "gamma " << gamma;
        EXPECT_EQ(est.hits_slits + est.hits_circle, est.walks);
    }
}

TEST(MonteCarlo, ScaleInvariant) {
    const SlitSet k(1.0, {{-0.9, -0.4}, {0.2, 0.35}});
    const auto a = mc_harmonic_measure(k, {.walks = 100000, .seed = 3});
    const auto b = mc_harmonic_measure(k.scaled(5.0), {.walks = 100000, .seed = 3});
    EXPECT_NEAR(a.mean, b.mean, 3.0 * std::hypot(a.standard_error, b.standard_error));
}

TEST(MonteCarlo, ReproducibleAcrossWorkerCounts) {
    const auto k = extremal_slits(0.3, 1.0);
    const auto one = mc_harmonic_measure(k, {.walks = 20000, .seed = 11, .workers = 1});
    const auto four = mc_harmonic_measure(k, {.walks = 20000, .seed = 11, .workers = 4});
    EXPECT_EQ(one.hits_slits, four.hits_slits);
    const auto other = mc_harmonic_measure(k, {.walks = 20000, .seed = 12, .workers = 4});
    EXPECT_NE(one.hits_slits, other.hits_slits);
}

TEST(MonteCarlo, NonExtremalSetExceedsBound) {
    // One slit running from near the centre to the circle.
    const SlitSet k(1.0, {{0.05, 1.0}});
    const auto est = mc_harmonic_measure(k, {.walks = 100000, .seed = 5});
    EXPECT_GE(est.mean, solynin_lower_bound(k.measure() / 2.0) - 3.0 * est.standard_error);
}

TEST(MaxPrinciple, Bound) {
    EXPECT_DOUBLE_EQ(max_principle_bound(0.3, 2.0, 1.0), 0.3);
    EXPECT_DOUBLE_EQ(max_principle_bound(0.3, 2.0, 0.0), 2.0);
    EXPECT_THROW(max_principle_bound(3.0, 2.0, 0.5), ParameterError);
    EXPECT_THROW(max_principle_bound(0.0, 2.0, 0.5), ParameterError);
    // Threshold M = A / (2^{1/h} (2 C4)^alpha) against 2 C4 A with omega = h.
    const double a = 1.7, c4 = 1.3;
    for (double delta : {0.2, 0.5, 0.8}) {
        const double h = solynin_h(delta);
        const double alpha = (1.0 - h) / h;
        const double m = a / (std::pow(2.0, 1.0 / h) * std::pow(2.0 * c4, alpha));
        EXPECT_LE(max_principle_bound(m, 2.0 * c4 * a, h), 0.5 * a * (1.0 + 1e-12));
    }
}
