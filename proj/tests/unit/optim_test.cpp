#include <cmath>

#include "helpers.hpp"
#include "npde/error.hpp"
#include "npde/optim.hpp"
#include "npde/solver.hpp"
#include "oracles.hpp"

using namespace npde;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

} // namespace

TEST(L2Loss, Examples) {
    const LossValue a = l2_loss(vec({1, 2}), vec({1, 2}), vec({}), 0.0);
    EXPECT_EQ(a.loss, 0.0);
    EXPECT_EQ(a.grad_output, vec({0, 0}));
    const LossValue b = l2_loss(vec({3}), vec({1}), vec({2}), 0.1);
    EXPECT_DOUBLE_EQ(b.loss, 0.5 * (4 + 0.1 * 4));
    EXPECT_EQ(b.grad_output, vec({2}));
}

TEST(L2Loss, ShapeMismatchThrows) {
    EXPECT_THROW(l2_loss(vec({1, 2}), vec({1}), vec({}), 0.0), ShapeError);
    EXPECT_THROW(l2_loss(vec({1}), vec({1}), vec({}), -1.0), std::invalid_argument);
}

TEST(PdeConstrainedLoss, Terms) {
    const ThetaVector t = ThetaVector::flat(vec({3}));
    EXPECT_DOUBLE_EQ(pde_constrained_loss(vec({1}), vec({1}), t, 1.0, vec({0}), 0.0), 4.5);
    EXPECT_DOUBLE_EQ(pde_constrained_loss(vec({2}), vec({0}), t, 0.0, vec({1, 1}), 2.0), 2.0 + 2.0);
    EXPECT_THROW(pde_constrained_loss(vec({1}), vec({1}), t, -1.0, vec({0}), 0.0), std::invalid_argument);
}

TEST(DiscreteResidual, VanishesOnExplicitTrajectory) {
    std::mt19937_64 rng(41);
    const GridSpec g = make_grid(10, 0.5, 0.05, BoundaryCondition::periodic());
    const auto c = EllipticCoefficients::constant(g, 0.8, 0.0, ReactionSpec::fisher(1.0));
    const Trajectory t = solve_forward(FieldState(1, 10, npde::test::random_values(rng, 10, 0, 1)), c, g, 5,
                                       Scheme::explicit_euler);
    const Vector r = discrete_residual(t, c);
    EXPECT_EQ(r.size(), 50);
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SgdStep, Update) {
    const ThetaVector t = sgd_step(ThetaVector::flat(vec({1, 2})), vec({1, -1}), 0.5);
    EXPECT_EQ(t.values, vec({0.5, 2.5}));
    EXPECT_THROW(sgd_step(ThetaVector::flat(vec({1})), vec({1, 2}), 0.1), ShapeError);
}

TEST(AdamStep, FirstStepMovesByEta) {
    const AdamResult r = adam_step(AdamState::fresh(3, 0.01), ThetaVector::flat(vec({0, 0, 0})), vec({2, -5, 1e-3}));
    EXPECT_EQ(r.state.t, 1u);
    EXPECT_NEAR(r.theta.values[0], -0.01, 1e-9);
    EXPECT_NEAR(r.theta.values[1], 0.01, 1e-9);
    EXPECT_NEAR(r.theta.values[2], -0.01, 1e-6);
}

TEST(AdamStep, ZeroGradientLeavesThetaUnchanged) {
    const AdamResult r = adam_step(AdamState::fresh(2), ThetaVector::flat(vec({1, 2})), vec({0, 0}));
    EXPECT_EQ(r.theta.values, vec({1, 2}));
}

TEST(AdamStep, RejectsBadHyperparameters) {
    AdamState s = AdamState::fresh(1);
    s.beta1 = 1.0;
    EXPECT_THROW(adam_step(s, ThetaVector::flat(vec({0})), vec({1})), std::invalid_argument);
}

TEST(NewtonPinv, DiagonalExample) {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 2;
    h(1, 1) = 4;
    const SecondOrderStep s = newton_pinv_step(ThetaVector::flat(vec({0, 0})), vec({2, 4}), h, 1.0);
    npde::test::expect_near_all(s.theta.values, {-1, -1}, 1e-10);
    EXPECT_FALSE(s.damped);
}

TEST(NewtonPinv, QuadraticInOneStep) {
    std::mt19937_64 rng(42);
    const Matrix q = npde::test::random_matrix(rng, 5, 5);
    const Matrix a = q.transpose() * q + Matrix::Identity(5, 5);
    const Vector b = npde::test::random_vector(rng, 5);
    const Vector theta0 = npde::test::random_vector(rng, 5);
    const SecondOrderStep s = newton_pinv_step(ThetaVector::flat(theta0), a * theta0 - b, a, 1.0);
    const Vector exact = a.ldlt().solve(b);
    EXPECT_LT((s.theta.values - exact).norm(), 1e-9);
}

TEST(NewtonPinv, SingularHessianIsDamped) {
    const Matrix h = Matrix::Ones(2, 2);
    const SecondOrderStep s = newton_pinv_step(ThetaVector::flat(vec({0, 0})), vec({1, 1}), h, 1.0);
    EXPECT_TRUE(s.damped);
    EXPECT_TRUE(s.theta.values.allFinite());
}

TEST(GaussNewton, LinearLeastSquaresInOneStep) {
    std::mt19937_64 rng(43);
    const Matrix j = npde::test::random_matrix(rng, 20, 5);
    const Vector t = npde::test::random_vector(rng, 20);
    const Vector theta0 = Vector::Zero(5);
    const SecondOrderStep s = gauss_newton_step(ThetaVector::flat(theta0), j * theta0 - t, j, 1.0);
    oracle::Mat jm(20, oracle::Vec(5));
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 5; ++c) jm[r][c] = j(r, c);
    const auto want = oracle::least_squares(jm, oracle::Vec(t.data(), t.data() + 20));
    npde::test::expect_near_all(s.theta.values, want, 1e-10);
}

TEST(GaussNewton, AgreesWithNewtonOnNormalMatrix) {
    std::mt19937_64 rng(44);
    const Matrix j = npde::test::random_matrix(rng, 12, 4);
    const Vector r = npde::test::random_vector(rng, 12);
    const ThetaVector theta = ThetaVector::flat(npde::test::random_vector(rng, 4));
    const SecondOrderStep gn = gauss_newton_step(theta, r, j, 1.0);
    const Matrix h = j.transpose() * j;
    const SecondOrderStep nt = newton_pinv_step(theta, j.transpose() * r, h, 1.0);
    EXPECT_LT((gn.theta.values - nt.theta.values).norm(), 1e-8);
}

TEST(Lbfgs, EmptyHistoryIsSteepestDescent) {
    LBFGSState s;
    EXPECT_EQ(lbfgs_direction(s, vec({1, -2})), vec({-1, 2}));
}

TEST(Lbfgs, SinglePairWithSEqualY) {
    LBFGSState s;
    ASSERT_TRUE(s.push(vec({1, 2}), vec({1, 2})));
    npde::test::expect_near_all(lbfgs_direction(s, vec({0.3, -0.7})), {-0.3, 0.7}, 1e-15);
}

TEST(Lbfgs, RejectsNegativeCurvatureAndTrimsMemory) {
    LBFGSState s;
    s.memory = 2;
    EXPECT_FALSE(s.push(vec({1, 0}), vec({-1, 0})));
    EXPECT_TRUE(s.push(vec({1, 0}), vec({1, 0})));
    EXPECT_TRUE(s.push(vec({0, 1}), vec({0, 2})));
    EXPECT_TRUE(s.push(vec({1, 1}), vec({2, 1})));
    EXPECT_EQ(s.history.size(), 2u);
    EXPECT_EQ(s.history.front().s, vec({0, 1}));
}

TEST(Lbfgs, MatchesDenseBfgs) {
    std::mt19937_64 rng(45);
    const Matrix q = npde::test::random_matrix(rng, 6, 6);
    const Matrix a = q.transpose() * q + Matrix::Identity(6, 6);
    LBFGSState s;
    std::vector<std::pair<oracle::Vec, oracle::Vec>> pairs;
    for (int i = 0; i < 4; ++i) {
        const Vector sv = npde::test::random_vector(rng, 6);
        const Vector yv = a * sv;
        ASSERT_TRUE(s.push(sv, yv));
        pairs.emplace_back(oracle::Vec(sv.data(), sv.data() + 6), oracle::Vec(yv.data(), yv.data() + 6));
    }
    const Vector g = npde::test::random_vector(rng, 6);
    const auto want = oracle::bfgs_direction(pairs, oracle::Vec(g.data(), g.data() + 6));
    npde::test::expect_near_all(lbfgs_direction(s, g), want, 1e-12);
}

TEST(GradFd, QuadraticIsExact) {
    const auto f = [](const Vector& x) { return 0.5 * x.squaredNorm() + x[0] * x[1]; };
    const Vector g = grad_fd(f, vec({1.0, 2.0}));
    npde::test::expect_near_all(g, {3.0, 3.0}, 1e-8);
}

TEST(GradFd, NonFiniteLossNamesCoordinate) {
    const auto f = [](const Vector& x) { return x[1] > 0.5 ? std::nan("") : 0.0; };
    try {
        grad_fd(f, vec({0.0, 0.5}));
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
    }
}

TEST(ThetaLayout, DisjointAndOrdered) {
    ThetaLayout l;
    EXPECT_EQ(l.add("m", "dense0", "W", 6), 0u);
    EXPECT_EQ(l.add("m", "dense0", "b", 2), 6u);
    EXPECT_EQ(l.total(), 8u);
    EXPECT_NO_THROW(l.validate());
    EXPECT_EQ(l.find("dense0", "b").offset, 6u);
    EXPECT_ANY_THROW(l.find("dense1", "W"));
}

TEST(ThetaVector, ViewsAlias) {
    ThetaVector t;
    t.layout.add("m", "blk", "a", 2);
    t.layout.add("m", "blk", "b", 3);
    t.values = Vector::Zero(5);
    t.view("blk", "b")[1] = 7.0;
    EXPECT_EQ(t.values[3], 7.0);
}

TEST(SpdCondition, IdentityAndSingular) {
    EXPECT_NEAR(spd_condition(Matrix::Identity(3, 3)), 1.0, 1e-12);
    EXPECT_TRUE(std::isinf(spd_condition(Matrix::Ones(2, 2))) || spd_condition(Matrix::Ones(2, 2)) > kConditionLimit);
}

TEST(L2Loss, UnitResidualAndDecay) {
    EXPECT_DOUBLE_EQ(l2_loss(vec({1, 0}), vec({0, 0}), vec({}), 0.0).loss, 0.5);
    EXPECT_DOUBLE_EQ(l2_loss(vec({1, 0}), vec({0, 0}), vec({2}), 0.1).loss, 0.7);
}

TEST(PdeConstrainedLoss, ExactSolveAndResidualOnly) {
    const ThetaVector zero = ThetaVector::flat(vec({0}));
    EXPECT_EQ(pde_constrained_loss(vec({1, 2}), vec({1, 2}), ThetaVector::flat(vec({5})), 0.0, vec({0}), 3.0), 0.0);
    EXPECT_DOUBLE_EQ(pde_constrained_loss(vec({0}), vec({0}), zero, 0.0, vec({1}), 2.0), 1.0);
}

TEST(SgdStep, ArithmeticAndContraction) {
    EXPECT_EQ(sgd_step(ThetaVector::flat(vec({1})), vec({2}), 0.5).values, vec({0}));
    EXPECT_EQ(sgd_step(ThetaVector::flat(vec({1, 2})), vec({0, 0}), 0.5).values, vec({1, 2}));
    for (double eta : {0.1, 1.0, 1.9}) {
        ThetaVector t = ThetaVector::flat(vec({3.0}));
        for (int i = 0; i < 10; ++i) {
            const double before = std::abs(t.values[0]);
            t = sgd_step(t, t.values, eta);
            if (before > 0.0) EXPECT_LT(std::abs(t.values[0]), before) << eta;
        }
    }
}

TEST(AdamStep, DefaultFirstStep) {
    const AdamResult r = adam_step(AdamState::fresh(1), ThetaVector::flat(vec({0})), vec({1}));
    EXPECT_NEAR(r.theta.values[0], -0.001 / (1 + 1e-8), 1e-15);
    const AdamResult z = adam_step(AdamState::fresh(2), ThetaVector::flat(vec({0, 0})), vec({0, 0}));
    EXPECT_EQ(z.state.m, vec({0, 0}));
    EXPECT_EQ(z.state.v, vec({0, 0}));
}

TEST(AdamStep, NoHistoryIsSignScaled) {
    AdamState s = AdamState::fresh(3, 0.01, 0.0, 0.0, 1e-12);
    const AdamResult r = adam_step(s, ThetaVector::flat(vec({0, 0, 0})), vec({5, -0.2, 1e-3}));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(r.theta.values[i]), 0.01, 1e-10);
}

TEST(NewtonPinv, IdentityIsSgd) {
    const ThetaVector t = ThetaVector::flat(vec({1, -2, 3}));
    const SecondOrderStep s = newton_pinv_step(t, vec({0.5, 1, -1}), Matrix::Identity(3, 3), 0.3);
    npde::test::expect_near_all(s.theta.values, {1 - 0.15, -2 - 0.3, 3 + 0.3}, 1e-11);
}

TEST(GaussNewton, ZeroResidualAndIdentityJacobian) {
    const ThetaVector t = ThetaVector::flat(vec({1, 2}));
    EXPECT_EQ(gauss_newton_step(t, vec({0, 0}), Matrix::Identity(2, 2), 1.0).theta.values, vec({1, 2}));
    npde::test::expect_near_all(gauss_newton_step(t, vec({0.5, -1}), Matrix::Identity(2, 2), 0.5).theta.values,
                                {0.75, 2.5}, 1e-11);
}

TEST(GradFd, LinearAndQuadratic) {
    npde::test::expect_near_all(grad_fd([](const Vector& x) { return x[0]; }, vec({0.3, 7, -1})), {1, 0, 0}, 1e-9);
    npde::test::expect_near_all(grad_fd([](const Vector& x) { return 0.5 * x.squaredNorm(); }, vec({3, 4})), {3, 4},
                                1e-8);
}
