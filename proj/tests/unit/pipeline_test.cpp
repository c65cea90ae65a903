#include <cmath>

#include "helpers.hpp"
#include "npde/optim.hpp"
#include "npde/pipeline.hpp"
#include "npde/solver.hpp"

using namespace npde;

namespace {

double rel_err(const Vector& g, const Vector& fd) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(g[i] - fd[i]) / (std::abs(fd[i]) + 1e-3));
    return worst;
}

Pipeline dense_net() {
    return Pipeline({DenseStage{3, 4, ReactionSpec::sigmoid(1.0)}, DenseStage{4, 2, ReactionSpec::none()}});
}

Pipeline diffusion_net(bool convection) {
    DiffusionStage d;
    d.grid = make_grid(10, 0.5, 0.03, BoundaryCondition::mirror());
    d.n_steps = 3;
    d.reaction = ReactionSpec::fisher(0.5);
    d.learn_convection = convection;
    return Pipeline({d});
}

} // namespace

TEST(Pipeline, LayoutCoversTheta) {
    const Pipeline p = dense_net();
    EXPECT_EQ(p.input_size(), 3u);
    EXPECT_EQ(p.output_size(), 2u);
    EXPECT_EQ(p.layout().total(), 3u * 4 + 4 + 4 * 2 + 2);
    EXPECT_NO_THROW(p.layout().validate());
}

TEST(Pipeline, RejectsMismatchedStages) {
    EXPECT_THROW(Pipeline({DenseStage{3, 4, {}}, DenseStage{5, 2, {}}}), std::invalid_argument);
    EXPECT_THROW(Pipeline({DenseStage{3, 4, ReactionSpec::source({1, 2, 3, 4})}}), std::invalid_argument);
}

TEST(Pipeline, EmptyPassesThrough) {
    const Pipeline p;
    const Vector x = Vector::LinSpaced(4, 0.0, 1.0);
    EXPECT_EQ(p.forward(ThetaVector::flat(Vector(0)), x), x);
}

TEST(Pipeline, InitIsSeeded) {
    const Pipeline p = dense_net();
    EXPECT_EQ(p.init_theta(5).values, p.init_theta(5).values);
    EXPECT_NE(p.init_theta(5).values, p.init_theta(6).values);
}

TEST(Pipeline, DenseGradientMatchesFiniteDifference) {
    const Pipeline p = dense_net();
    std::mt19937_64 rng(51);
    const Sample s{npde::test::random_vector(rng, 3), npde::test::random_vector(rng, 2)};
    const LossSpec loss{LossKind::l2_decay, 1e-3};
    const ThetaVector theta = p.init_theta(1);
    const Vector g = pipeline_gradient(p, s, loss, theta);
    const Vector fd = grad_fd(
        [&](const Vector& v) {
            ThetaVector t = theta;
            t.values = v;
            return pipeline_loss(p, s, loss, t);
        },
        theta.values);
    EXPECT_LE(rel_err(g, fd), 1e-5);
}

TEST(Pipeline, DiffusionGradientMatchesFiniteDifference) {
    for (bool conv : {false, true}) {
        const Pipeline p = diffusion_net(conv);
        std::mt19937_64 rng(52);
        const Sample s{npde::test::random_vector(rng, 10, 0, 1), npde::test::random_vector(rng, 10, 0, 1)};
        const LossSpec loss{LossKind::l2_decay, 0.0};
        const ThetaVector theta = p.init_theta(2);
        const Vector g = pipeline_gradient(p, s, loss, theta);
        const Vector fd = grad_fd(
            [&](const Vector& v) {
                ThetaVector t = theta;
                t.values = v;
                return pipeline_loss(p, s, loss, t);
            },
            theta.values);
        EXPECT_LE(rel_err(g, fd), 1e-5) << "convection " << conv;
    }
}

TEST(Pipeline, DiffusionStageForwardIsSolver) {
    const Pipeline p = diffusion_net(false);
    const ThetaVector theta = p.init_theta(3);
    const auto& stage = std::get<DiffusionStage>(p.stages()[0]);
    EllipticCoefficients c;
    const auto a = theta.view(p.layout().ranges()[0].block, "A");
    c.a.assign(a.data(), a.data() + a.size());
    c.b.assign(10, 0.0);
    c.reaction = stage.reaction;
    std::mt19937_64 rng(53);
    const auto u = npde::test::random_values(rng, 10, 0, 1);
    const Trajectory t = solve_forward(FieldState(1, 10, u), c, stage.grid, 3, Scheme::explicit_euler);
    const Vector out = p.forward(theta, Eigen::Map<const Vector>(u.data(), 10));
    npde::test::expect_near_all(out, npde::test::values_of(t.final_slice()), 1e-15);
}

TEST(Pipeline, JacobianAgreesWithVjp) {
    const Pipeline p = dense_net();
    std::mt19937_64 rng(54);
    const ThetaVector theta = p.init_theta(4);
    const Vector x = npde::test::random_vector(rng, 3);
    const Vector w = npde::test::random_vector(rng, 2);
    const Matrix j = p.jacobian(theta, x);
    ASSERT_EQ(j.rows(), 2);
    ASSERT_EQ(j.cols(), static_cast<Eigen::Index>(theta.size()));
    EXPECT_LT((Vector(j.transpose() * w) - p.vjp(theta, x, w)).norm(), 1e-13);
}

TEST(Pipeline, CheckStabilityRejectsLargeA) {
    const Pipeline p = diffusion_net(false);
    ThetaVector theta = p.init_theta(5);
    EXPECT_NO_THROW(p.check_stability(theta));
    theta.values.setConstant(100.0);
    EXPECT_THROW(p.check_stability(theta), std::invalid_argument);
}

TEST(Pipeline, DatasetLossSumsSamples) {
    const Pipeline p = dense_net();
    std::mt19937_64 rng(55);
    std::vector<Sample> samples;
    for (int i = 0; i < 3; ++i) samples.push_back({npde::test::random_vector(rng, 3), npde::test::random_vector(rng, 2)});
    const LossSpec loss{LossKind::l2_decay, 0.0};
    const ThetaVector theta = p.init_theta(6);
    double sum = 0.0;
    for (const auto& s : samples) sum += pipeline_loss(p, s, loss, theta);
    EXPECT_NEAR(dataset_loss(p, samples, loss, theta), sum, 1e-14);
    const LossAndGradient lg = dataset_loss_and_gradient(p, samples, loss, theta);
    EXPECT_NEAR(lg.loss, sum, 1e-14);
}

TEST(Pipeline, ToBlocksReproducesForward) {
    const Pipeline p = dense_net();
    const ThetaVector theta = p.init_theta(7);
    const auto blocks = p.to_blocks(theta);
    ASSERT_EQ(blocks.size(), 2u);
    const Vector x = Vector::LinSpaced(3, -1, 1);
    Vector y = x;
    for (const auto& b : blocks) y = std::get<DenseBlock>(b).forward(y);
    EXPECT_LT((y - p.forward(theta, x)).norm(), 1e-15);
}
