#include <cmath>

#include "helpers.hpp"
#include "npde/reference.hpp"

using namespace npde;

TEST(HeatKernel, SpreadAndMassInvariant) {
    const GaussianProfile p{2.0, 1.0, 0.5};
    const GaussianProfile q = heat_kernel_evolve(p, 1.0, 0.25);
    EXPECT_DOUBLE_EQ(q.sigma2, 1.0);
    EXPECT_DOUBLE_EQ(q.center, 1.0);
    EXPECT_NEAR(q.amplitude * std::sqrt(q.sigma2), p.amplitude * std::sqrt(p.sigma2), 1e-15);
    EXPECT_DOUBLE_EQ(p(1.0), 2.0);
}

TEST(HeatKernel, SolvesHeatEquation) {
    const GaussianProfile p{1.0, 0.0, 0.3};
    const double d = 0.7, t = 0.4, x = 0.35, e = 1e-4;
    const auto u = [&](double tt, double xx) { return heat_kernel_evolve(p, d, tt)(xx); };
    const double ut = (u(t + e, x) - u(t - e, x)) / (2 * e);
    const double uxx = (u(t, x + e) - 2 * u(t, x) + u(t, x - e)) / (e * e);
    EXPECT_NEAR(ut, d * uxx, 1e-5);
}

TEST(HeatKernel, RejectsBadProfile) {
    EXPECT_THROW((GaussianProfile{1.0, 0.0, 0.0}.validate()), std::invalid_argument);
}

TEST(PeriodicGaussian, IsPeriodic) {
    const GaussianProfile p{1.0, 0.0, 4.0};
    EXPECT_NEAR(periodic_gaussian(p, -4.9, -5.0, 10.0), periodic_gaussian(p, 5.1, -5.0, 10.0), 1e-14);
    EXPECT_GT(periodic_gaussian(p, 4.0, -5.0, 10.0), p(4.0));
}

TEST(Fisher, MinimumFrontSpeed) {
    EXPECT_DOUBLE_EQ(fisher_min_front_speed(1.0, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(fisher_min_front_speed(4.0, 0.25), 2.0);
    EXPECT_EQ(fisher_min_front_speed(0.0, 3.0), 0.0);
}

TEST(Wick, CoefficientAndInverse) {
    EXPECT_DOUBLE_EQ(wick_coefficient(1.0, 0.5), 1.0);
    for (double a2 : {0.1, 1.0, 3.0}) EXPECT_NEAR(wick_coefficient(2.0, wick_mass(2.0, a2)), a2, 1e-15);
}

TEST(Sigmoid, DerivativeIdentity) {
    for (double r : {0.5, 1.0, 3.0})
        for (double x : {-2.0, 0.0, 1.5}) {
            const IdentitySides s = sigmoid_derivative_identity(r, x);
            EXPECT_NEAR(s.lhs, s.rhs, 1e-14);
        }
}

TEST(Front, PositionInterpolates) {
    const FieldState u(1, 4, {1.0, 1.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(front_position(u, 0.5, 0.5), 0.75);
    EXPECT_DOUBLE_EQ(front_position(FieldState(1, 3, {0.1, 0.0, 0.0}), 1.0), -1.0);
}

TEST(Front, SpeedFromLinearMotion) {
    std::vector<double> t, x;
    for (int i = 0; i < 10; ++i) {
        t.push_back(i);
        x.push_back(i < 5 ? 0.3 * i : 3.0 + 2.0 * i);
    }
    EXPECT_NEAR(front_speed(t, x), 2.0, 1e-12);
    EXPECT_THROW(front_speed({0, 1, 2}, {0, 1, 2}), std::invalid_argument);
}
