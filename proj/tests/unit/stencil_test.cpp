#include "helpers.hpp"
#include "npde/error.hpp"
#include "npde/stencil.hpp"

using namespace npde;
using npde::test::field1d;
using npde::test::values_of;

TEST(Laplacian1D, ScalesByInverseHSquared) {
    EXPECT_EQ(laplacian_1d(1.0).taps, (std::array<double, 3>{1, -2, 1}));
    EXPECT_EQ(laplacian_1d(0.5).taps, (std::array<double, 3>{4, -8, 4}));
    EXPECT_EQ(laplacian_1d(2.0).taps, (std::array<double, 3>{0.25, -0.5, 0.25}));
    EXPECT_THROW(laplacian_1d(0.0), std::invalid_argument);
}

TEST(Laplacian2D, FivePointTaps) {
    const Stencil2D s = laplacian_2d_5pt();
    const Stencil2D want{{{{0, 1, 0}, {1, -4, 1}, {0, 1, 0}}}};
    EXPECT_EQ(s, want);
    EXPECT_EQ(s.sum(), 0.0);
}

TEST(Laplacian2D, NinePointTaps) {
    const Stencil2D s = laplacian_2d_9pt();
    const Stencil2D want{{{{0.25, 0.5, 0.25}, {0.5, -3, 0.5}, {0.25, 0.5, 0.25}}}};
    EXPECT_EQ(s, want);
    EXPECT_EQ(s.sum(), 0.0);
}

TEST(Laplacian2D, ConstantFieldMapsToZero) {
    const FieldState seven(2, 6, std::vector<double>(36, 7.0));
    for (const Stencil2D& s : {laplacian_2d_5pt(), laplacian_2d_9pt()}) {
        const FieldState out = apply_stencil(seven, s, BoundaryCondition::periodic());
        for (double v : out.values()) EXPECT_EQ(v, 0.0);
    }
}

TEST(Laplacian2D, NinePointAnnihilatesLinearInterior) {
    const std::size_t n = 7;
    std::vector<double> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i * n + j] = static_cast<double>(j);
    const FieldState out = apply_stencil(FieldState(2, n, v), laplacian_2d_9pt(), BoundaryCondition::periodic());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 1; j + 1 < n; ++j) EXPECT_NEAR(out.at(i, j), 0.0, 1e-14);
}

TEST(VariableStencil, Examples) {
    EXPECT_EQ(variable_stencil_1d(1, 1, 1, 1).taps, (std::array<double, 3>{1, -2, 1}));
    EXPECT_EQ(variable_stencil_1d(2, 3, 4, 1).taps, (std::array<double, 3>{2, -6, 4}));
    EXPECT_EQ(variable_stencil_1d(0, 0, 0, 1).taps, (std::array<double, 3>{0, -0.0, 0}));
}

TEST(VariableStencil, EqualAIsScaledLaplacian) {
    for (double a : {0.5, 1.5, 3.0}) {
        for (double h : {0.25, 0.5, 2.0}) {
            const auto v = variable_stencil_1d(a, a, a, h).taps;
            const auto l = laplacian_1d(h).taps;
            for (int i = 0; i < 3; ++i) EXPECT_EQ(v[i], a * l[i]);
        }
    }
}

TEST(ApplyStencil, OneDimensionalExamples) {
    const Stencil1D lap{{1, -2, 1}};
    EXPECT_EQ(values_of(apply_stencil(field1d({0, 1, 0}), lap, BoundaryCondition::dirichlet(0))),
              (std::vector<double>{1, -2, 1}));
    const Stencil1D id{{0, 1, 0}};
    for (auto bc : {BoundaryCondition::periodic(), BoundaryCondition::mirror(), BoundaryCondition::extend(),
                    BoundaryCondition::dirichlet(9)}) {
        EXPECT_EQ(values_of(apply_stencil(field1d({1, 2, 3}), id, bc)), (std::vector<double>{1, 2, 3}));
    }
    EXPECT_EQ(values_of(apply_stencil(field1d({4, 4, 4, 4}), lap, BoundaryCondition::periodic())),
              (std::vector<double>{0, 0, 0, 0}));
}

TEST(ApplyStencil, DimensionMismatchThrows) {
    EXPECT_THROW(apply_stencil(field1d({1, 2, 3}), laplacian_2d_5pt(), BoundaryCondition::periodic()), ShapeError);
    EXPECT_THROW(apply_stencil(FieldState(2, 3, std::vector<double>(9, 0.0)), laplacian_1d(1.0),
                               BoundaryCondition::periodic()),
                 ShapeError);
}

TEST(ApplyStencil, Linearity) {
    std::mt19937_64 rng(8);
    const Stencil1D s{{0.3, -1.1, 0.7}};
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = npde::test::random_values(rng, 11), g = npde::test::random_values(rng, 11);
        const double a = 1.7, b = -0.4;
        std::vector<double> combo(11);
        for (int i = 0; i < 11; ++i) combo[i] = a * f[i] + b * g[i];
        const auto bc = BoundaryCondition::mirror();
        const auto lhs = values_of(apply_stencil(field1d(combo), s, bc));
        const auto fa = values_of(apply_stencil(field1d(f), s, bc));
        const auto ga = values_of(apply_stencil(field1d(g), s, bc));
        for (int i = 0; i < 11; ++i) EXPECT_NEAR(lhs[i], a * fa[i] + b * ga[i], 1e-12 * (1 + std::abs(lhs[i])));
    }
}

TEST(EllipticApply, ReducesToLaplacian) {
    std::mt19937_64 rng(9);
    const GridSpec g = make_grid(12, 0.3, 0.01, BoundaryCondition::periodic());
    const FieldState u = field1d(npde::test::random_values(rng, 12));
    const auto lap = values_of(apply_stencil(u, laplacian_1d(0.3), g.bc));
    npde::test::expect_near_all(values_of(elliptic_apply(u, EllipticCoefficients::constant(g, 1.0), g)), lap, 1e-12);
    const auto scaled = values_of(elliptic_apply(u, EllipticCoefficients::constant(g, 2.5), g));
    for (std::size_t i = 0; i < lap.size(); ++i) EXPECT_NEAR(scaled[i], 2.5 * lap[i], 1e-12 * (1 + std::abs(lap[i])));
}

TEST(EllipticApply, ReactionOnly) {
    const GridSpec g = make_grid(4, 1.0, 0.1, BoundaryCondition::periodic());
    const FieldState u = field1d({0.1, -2.0, 3.5, 7.0});
    EXPECT_EQ(elliptic_apply(u, EllipticCoefficients::constant(g, 0.0, 0.0, ReactionSpec::linear(1.0)), g), u);
}

TEST(EllipticApply, FisherAddsQuarterAtHalf) {
    const GridSpec g = make_grid(5, 1.0, 0.1, BoundaryCondition::periodic());
    const FieldState u = field1d({0.5, 0.5, 0.5, 0.5, 0.5});
    const auto out = values_of(elliptic_apply(u, EllipticCoefficients::constant(g, 1.0, 0.0, ReactionSpec::fisher(1.0)), g));
    for (double v : out) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(EllipticApply, CentredConvection) {
    const GridSpec g = make_grid(5, 0.5, 0.1, BoundaryCondition::periodic());
    const FieldState u = field1d({0, 1, 2, 3, 4});
    const auto out = values_of(elliptic_apply(u, EllipticCoefficients::constant(g, 0.0, 1.0), g));
    // (u_{j+1} - u_{j-1}) / (2h), wrapping at the ends
    npde::test::expect_near_all(out, {(1 - 4) / 1.0, 2 / 1.0, 2 / 1.0, 2 / 1.0, (0 - 3) / 1.0}, 1e-14);
}

TEST(EllipticCoefficients, ValidateShapes) {
    const GridSpec g = make_grid(4, 1.0, 0.1, BoundaryCondition::periodic());
    EllipticCoefficients c = EllipticCoefficients::constant(g, 1.0);
    c.a.pop_back();
    EXPECT_THROW(c.validate(g), ShapeError);
}
