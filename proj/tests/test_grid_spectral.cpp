#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "mhdlab/io/initial_data.hpp"
#include "mhdlab/spectral.hpp"

using namespace mhdlab;

namespace {

constexpr double kPi = std::numbers::pi;

Grid box2(int n = 32) { return Grid(2, n, 2.0 * kPi); }
Grid box3(int n = 16) { return Grid(3, n, 2.0 * kPi); }

double max_mode_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.grid().size(); ++i) m = std::max(m, std::abs(a.mode(i) - b.mode(i)));
    return m;
}

double max_value_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.grid().size(); ++i) m = std::max(m, std::abs(a.value(i) - b.value(i)));
    return m;
}

double max_field_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (int c = 0; c < a.dim(); ++c) m = std::max(m, max_value_diff(a[c], b[c]));
    return m;
}

// Brute-force dyadic mean oscillation: every point is binned into its cube by
// integer division of its index, independent of the library's cube walk.
double dyadic_oscillation_oracle(const ScalarField& f) {
    const Grid& g = f.grid();
    double best = 0.0;
    for (int side = g.n() / 2; side >= 1; side /= 2) {
        std::map<std::vector<int>, std::vector<double>> bins;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Multi idx = g.unflat(i);
            std::vector<int> key;
            for (int a = 0; a < g.dim(); ++a) key.push_back(idx[a] / side);
            bins[key].push_back(f.value(i));
        }
        for (const auto& [key, vals] : bins) {
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= vals.size();
            double osc = 0.0;
            for (double v : vals) osc += std::abs(v - mean);
            best = std::max(best, osc / vals.size());
        }
    }
    return best;
}

} // namespace

TEST(Grid, RejectsInvalidShapes) {
    EXPECT_THROW(Grid(4, 16, 1.0), ParameterError);
    EXPECT_THROW(Grid(2, 4, 1.0), ParameterError);
    EXPECT_THROW(Grid(2, 24, 1.0), ParameterError);
    EXPECT_THROW(Grid(3, 16, 0.0), ParameterError);
    EXPECT_NO_THROW(Grid(3, 8, 1.0));
}

TEST(Grid, WavenumberLatticeIsScaledIntegerLattice) {
    const Grid g(2, 16, 4.0);
    EXPECT_DOUBLE_EQ(g.wavenumber(3), 3 * 2.0 * kPi / 4.0);
    EXPECT_DOUBLE_EQ(g.wavenumber(15), -1 * 2.0 * kPi / 4.0);
    EXPECT_DOUBLE_EQ(g.derivative_wavenumber(8), 0.0);
}

TEST(SpectralField, RoundTripReproducesSamples) {
    const Grid g = box3();
    const auto u = random_divergence_free(g, 11, 1.0, 1.0);
    const auto back = ScalarField::from_modes(g, std::vector<cplx>(u[0].modes().begin(), u[0].modes().end()));
    EXPECT_LE(max_value_diff(u[0], back), 1e-12 * sup_norm(u[0]));
}

TEST(SpectralField, ConstantHasMatchingZeroMode) {
    const Grid g = box2();
    const auto f = ScalarField::from_values(g, std::vector<double>(g.size(), 2.5));
    EXPECT_NEAR(f.mode(0).real(), 2.5, 1e-15);
}

TEST(HeatPropagate, ZeroTimeIsBitIdentical) {
    const Grid g = box2();
    const auto u = random_divergence_free(g, 3, 1.0, 1.0);
    const auto h = heat_propagate(u, 0.7, 0.0);
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(h[c].mode(i), u[c].mode(i));
}

TEST(HeatPropagate, ConstantUnchanged) {
    const Grid g = box2();
    const auto f = VectorField::constant(g, {1.5, -2.0, 0.0});
    const auto h = heat_propagate(f, 2.0, 3.0);
    EXPECT_LE(max_field_diff(f, h), 1e-14);
}

TEST(HeatPropagate, SingleModeDecaysAsGaussianMultiplier) {
    const Grid g = box2();
    // e^{i k.x} with k = (1, 2): |k|^2 = 5.
    std::vector<cplx> m(g.size());
    m[g.flat({1, 2, 0})] = 1.0;
    const auto f = ScalarField::from_modes(g, m);
    const auto h = heat_propagate(f, 1.0, 1.0);
    EXPECT_NEAR(std::abs(h.mode(g.flat({1, 2, 0}))), std::exp(-5.0), 1e-16);
}

TEST(HeatPropagate, RejectsBadArguments) {
    const auto f = ScalarField::zero(box2());
    EXPECT_THROW(heat_propagate(f, 1.0, -0.1), ParameterError);
    EXPECT_THROW(heat_propagate(f, 0.0, 1.0), ParameterError);
}

TEST(HeatPropagate, Semigroup) {
    const Grid g = box3();
    const auto u = random_divergence_free(g, 5, 1.0, 1.0);
    const auto a = heat_propagate(heat_propagate(u, 0.3, 0.2), 0.3, 0.5);
    const auto b = heat_propagate(u, 0.3, 0.7);
    for (int c = 0; c < 3; ++c) EXPECT_LE(max_mode_diff(a[c], b[c]), 1e-12);
}

TEST(PartialDerivative, ConstantGivesZero) {
    const Grid g = box2();
    const auto f = ScalarField::from_values(g, std::vector<double>(g.size(), 4.0));
    EXPECT_LE(sup_norm(partial_derivative(f, 0)), 1e-14);
}

TEST(PartialDerivative, SineToCosine) {
    const Grid g = box2();
    const auto f = ScalarField::sample(g, [](const Point& x) { return std::sin(x[0]); });
    const auto df = partial_derivative(f, 0);
    const auto cosx = ScalarField::sample(g, [](const Point& x) { return std::cos(x[0]); });
    EXPECT_LE(max_value_diff(df, cosx), 1e-10);
}

TEST(PartialDerivative, MixedDerivativesCommuteExactly) {
    const Grid g = box3();
    const auto u = random_divergence_free(g, 8, 1.0, 1.0);
    const auto a = partial_derivative(partial_derivative(u[0], 0), 1);
    const auto b = partial_derivative(partial_derivative(u[0], 1), 0);
    // Same multiplier product, applied in the other order: equal up to one rounding per factor.
    for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_LE(std::abs(a.mode(i) - b.mode(i)), 4e-16 * std::abs(a.mode(i)));
}

TEST(PartialDerivative, AxisOutOfRange) {
    const auto f = ScalarField::zero(box2());
    EXPECT_THROW(partial_derivative(f, 2), ParameterError);
    EXPECT_THROW(partial_derivative(f, -1), ParameterError);
}

TEST(Divergence, GradientGivesLaplacian) {
    const Grid g = box2();
    const auto phi = ScalarField::sample(g, [](const Point& x) { return std::sin(2 * x[0]) * std::cos(x[1]); });
    const auto div = divergence(gradient(phi));
    // Lap(sin 2x cos y) = -5 sin 2x cos y.
    const auto expected = ScalarField::sample(g, [](const Point& x) { return -5 * std::sin(2 * x[0]) * std::cos(x[1]); });
    EXPECT_LE(max_value_diff(div, expected), 1e-10);
}

TEST(Divergence, CurlFormIsDivergenceFree) {
    const Grid g = box2();
    const auto psi = ScalarField::sample(g, [](const Point& x) { return std::sin(x[0]) * std::sin(3 * x[1]); });
    const VectorField v({scale(partial_derivative(psi, 1), -1.0), partial_derivative(psi, 0)});
    EXPECT_LE(sup_norm(divergence(v)), 1e-10);
}

TEST(Divergence, ZeroField) { EXPECT_EQ(sup_norm(divergence(VectorField::zero(box3()))), 0.0); }

TEST(LerayProject, FixesDivergenceFreeFields) {
    const Grid g = box3();
    const auto u = random_divergence_free(g, 2, 1.0, 1.0);
    EXPECT_LE(max_field_diff(leray_project(u), u), 1e-12);
}

TEST(LerayProject, KillsGradients) {
    const Grid g = box2();
    const auto phi = ScalarField::sample(g, [](const Point& x) { return std::cos(x[0] + 2 * x[1]); });
    EXPECT_LE(sup_norm(leray_project(gradient(phi))), 1e-12);
}

TEST(LerayProject, ShearPairUnchanged) {
    const Grid g = box3();
    const auto f = VectorField::sample(g, [](const Point& x) { return Point{std::sin(x[1]), std::sin(x[0]), 0.0}; });
    EXPECT_LE(sup_norm(divergence(f)), 1e-12);
    EXPECT_LE(max_field_diff(leray_project(f), f), 1e-12);
}

TEST(LerayProject, Idempotent) {
    const Grid g = box3();
    const auto f = VectorField::sample(g, [](const Point& x) {
        return Point{std::sin(x[0] + x[2]), std::cos(2 * x[1]), std::sin(x[0]) * std::cos(x[1])};
    });
    const auto p = leray_project(f);
    EXPECT_LE(max_field_diff(leray_project(p), p), 1e-12);
    EXPECT_TRUE(p.divergence_free());
}

TEST(TotalPressure, EqualFieldsCancel) {
    const Grid g = box3();
    const auto u = random_divergence_free(g, 4, 1.0, 1.0);
    EXPECT_LE(sup_norm(solve_total_pressure(u, u)), 1e-14);
    EXPECT_EQ(sup_norm(solve_total_pressure(VectorField::zero(g), VectorField::zero(g))), 0.0);
}

TEST(TotalPressure, TaylorGreenClosedForm) {
    const Grid g = box2();
    const auto u = VectorField::sample(g, [](const Point& x) {
        return Point{std::sin(x[0]) * std::cos(x[1]), -std::cos(x[0]) * std::sin(x[1]), 0.0};
    });
    // Steady Euler pressure of the Taylor-Green cell: (cos 2x + cos 2y) / 4.
    const auto expected = ScalarField::sample(g, [](const Point& x) { return 0.25 * (std::cos(2 * x[0]) + std::cos(2 * x[1])); });
    const auto pi = solve_total_pressure(u, VectorField::zero(g));
    EXPECT_LE(max_value_diff(pi, expected), 1e-8);
    EXPECT_NEAR(pi.mode(0).real(), 0.0, 1e-15);
}

TEST(TotalPressure, GridMismatch) {
    EXPECT_THROW(solve_total_pressure(VectorField::zero(box2(16)), VectorField::zero(box2(32))), GridMismatchError);
}

TEST(TotalPressure, PoissonResidual) {
    const Grid g = box3();
    const auto u = random_divergence_free(g, 21, 1.0, 0.8);
    const auto b = random_divergence_free(g, 22, 1.0, 0.6);
    const auto res = add(laplacian(solve_total_pressure(u, b)), stress_double_divergence(u, b));
    EXPECT_LE(sup_norm(res), 1e-8 * (std::pow(sup_norm(u), 2) + std::pow(sup_norm(b), 2)));
}

TEST(BmoEstimate, ConstantIsZero) {
    const Grid g = box2();
    EXPECT_EQ(bmo_norm_estimate(ScalarField::from_values(g, std::vector<double>(g.size(), 3.0))), 0.0);
}

TEST(BmoEstimate, SmoothedStepMatchesOracle) {
    const Grid g = box2(64);
    const auto step = ScalarField::sample(g, [](const Point& x) { return 0.5 * (1.0 + std::tanh(4.0 * (x[0] - kPi))); });
    const double est = bmo_norm_estimate(step);
    EXPECT_GT(est, 0.0);
    EXPECT_LE(est, 1.0);
    EXPECT_NEAR(est, dyadic_oscillation_oracle(step), 1e-14);
}

TEST(BmoEstimate, Homogeneous) {
    const Grid g = box2();
    const auto u = random_divergence_free(g, 9, 1.0, 1.0);
    EXPECT_NEAR(bmo_norm_estimate(scale(u[0], 3.5)), 3.5 * bmo_norm_estimate(u[0]), 1e-12);
}

TEST(SupNorm, Basics) {
    const Grid g = box2();
    EXPECT_EQ(sup_norm(VectorField::zero(g)), 0.0);
    EXPECT_DOUBLE_EQ(sup_norm(VectorField::constant(Grid(3, 8, 1.0), {3.0, 4.0, 0.0})), 5.0);
    // cos(x) is sampled at x = 0, where it attains its maximum exactly.
    const auto f = ScalarField::sample(g, [](const Point& x) { return 0.7 * std::cos(x[0]); });
    EXPECT_NEAR(sup_norm(f), 0.7, 1e-12);
}
