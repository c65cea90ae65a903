#include "npde/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "npde/blocks.hpp"
#include "npde/error.hpp"
#include "npde/io.hpp"
#include "npde/optim.hpp"
#include "npde/pipeline.hpp"
#include "npde/reference.hpp"
#include "npde/solver.hpp"
#include "npde/stencil.hpp"
#include "npde/train.hpp"
#include "oracles.hpp"

namespace npde::verify {

namespace {

// Experiment settings that are not pinned by the criteria themselves.
constexpr double kXorLearningRate = 0.001;
constexpr double kGrayScottH = 2.5 / 256.0;
constexpr double kGrayScottK = 1.0;
constexpr std::size_t kGrayScottPatch = 10;
constexpr std::size_t kGrayScottSteps = 10000;

Check at_most(std::string name, double measured, double tol) {
    return {std::move(name), measured, "<= " + format_double(tol), measured <= tol};
}

Check at_least(std::string name, double measured, double bound) {
    return {std::move(name), measured, ">= " + format_double(bound), measured >= bound};
}

Check within(std::string name, double measured, double lo, double hi) {
    return {std::move(name), measured, "in [" + format_double(lo) + ", " + format_double(hi) + "]",
            measured >= lo && measured <= hi};
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> to_std(const FieldState& f) { return {f.values().begin(), f.values().end()}; }

oracle::Mat to_rows(const Matrix& m) {
    oracle::Mat out(static_cast<std::size_t>(m.rows()), oracle::Vec(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double max_abs_diff(const Vector& a, const std::vector<double>& b) {
    return max_abs_diff(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())), b);
}

double stencil_diff(const Stencil2D& a, const Stencil2D& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a.taps[i][j] - b.taps[i][j]));
    return d;
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

// |g - fd| <= 1e-5 |fd| + 1e-8 elementwise, reported as the worst scaled ratio
double gradient_error(const Vector& g, const Vector& fd) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(g[i] - fd[i]) / (std::abs(fd[i]) + 1e-3));
    }
    return worst;
}

// ---------------------------------------------------------------------------

void stencil_fidelity(CriterionResult& res) {
    const Stencil1D three = laplacian_1d(1.0);
    const std::array<double, 3> three_ref{1.0, -2.0, 1.0};
    res.checks.push_back(at_most("3-point taps max |diff|", max_abs_diff(three.taps, three_ref), 0.0));

    const Stencil2D five_ref{{{{0.0, 1.0, 0.0}, {1.0, -4.0, 1.0}, {0.0, 1.0, 0.0}}}};
    res.checks.push_back(at_most("5-point taps max |diff|", stencil_diff(laplacian_2d_5pt(), five_ref), 0.0));

    const Stencil2D nine_ref{{{{0.25, 0.5, 0.25}, {0.5, -3.0, 0.5}, {0.25, 0.5, 0.25}}}};
    res.checks.push_back(at_most("9-point taps max |diff|", stencil_diff(laplacian_2d_9pt(), nine_ref), 0.0));
    res.checks.push_back(at_most("9-point tap sum", std::abs(laplacian_2d_9pt().sum()), 0.0));
}

double heat_error(double h) {
    const double width = 20.0, left = -10.0, d = 1.0, t_end = 0.5, r = 0.25;
    const auto n = static_cast<std::size_t>(std::lround(width / h));
    const double k = r * h * h / d;
    const auto steps = static_cast<std::size_t>(std::lround(t_end / k));
    const GridSpec grid = make_grid(n, h, k, BoundaryCondition::periodic());
    const GaussianProfile p0{1.0, 0.0, 1.0};
    std::vector<double> init(n);
    for (std::size_t j = 0; j < n; ++j) init[j] = periodic_gaussian(p0, left + h * j, left, width);
    FieldState u = FieldState::from_values(grid, std::move(init));
    const auto coeffs = EllipticCoefficients::constant(grid, d);
    for (std::size_t s = 0; s < steps; ++s) u = step_explicit(u, coeffs, grid);
    const GaussianProfile p1 = heat_kernel_evolve(p0, d, k * steps);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        err = std::max(err, std::abs(u[j] - periodic_gaussian(p1, left + h * j, left, width)));
    }
    return err;
}

void heat_kernel(CriterionResult& res) {
    const double coarse = heat_error(0.05);
    const double fine = heat_error(0.025);
    res.checks.push_back(at_most("L-inf error at h=0.05", coarse, 1e-3));
    res.checks.push_back(within("error ratio h=0.05 / h=0.025", coarse / fine, 3.2, 4.8));
}

void fisher_front(CriterionResult& res) {
    const std::size_t n = 4000;
    const double h = 0.1, k = 0.004, rate = 1.0, d = 1.0, t_end = 150.0, sample_every = 1.0;
    const GridSpec grid = make_grid(n, h, k, BoundaryCondition::extend());
    std::vector<double> init(n, 0.0);
    for (std::size_t j = 0; j * h < 20.0; ++j) init[j] = 1.0;
    FieldState u = FieldState::from_values(grid, std::move(init));
    const auto coeffs = EllipticCoefficients::constant(grid, d, 0.0, ReactionSpec::fisher(rate));
    const auto steps = static_cast<std::size_t>(std::lround(t_end / k));
    const auto stride = static_cast<std::size_t>(std::lround(sample_every / k));
    std::vector<double> times{0.0}, pos{front_position(u, h)};
    for (std::size_t s = 1; s <= steps; ++s) {
        u = step_explicit(u, coeffs, grid);
        if (s % stride == 0) {
            times.push_back(k * s);
            pos.push_back(front_position(u, h));
        }
    }
    const double expected = fisher_min_front_speed(rate, d);
    const double speed = front_speed(times, pos);
    res.checks.push_back(at_most("front speed relative error vs 2 sqrt(rD)", std::abs(speed - expected) / expected,
                                 0.05));
}

void equivalence(CriterionResult& res) {
    const std::array<BoundaryCondition, 4> bcs{BoundaryCondition::periodic(), BoundaryCondition::mirror(),
                                               BoundaryCondition::extend(), BoundaryCondition::dirichlet(0.0)};
    double conv_vs_solver = 0.0, conv_vs_loop = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const auto n = std::uniform_int_distribution<std::size_t>(3, 48)(rng);
        BoundaryCondition bc = bcs[seed % 4];
        if (bc.kind == BoundaryKind::dirichlet) bc.value = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        const double h = 0.1;
        const double r = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        const GridSpec grid = make_grid(n, h, r * h * h, bc);
        EllipticCoefficients coeffs;
        coeffs.a = to_std(random_vector(rng, static_cast<Eigen::Index>(n), 0.0, 1.0));
        coeffs.b.assign(n, 0.0);
        const double rate = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        const oracle::Rxn rxn = std::array{oracle::Rxn::none, oracle::Rxn::fisher, oracle::Rxn::linear}[seed % 3];
        if (rxn == oracle::Rxn::fisher) coeffs.reaction = ReactionSpec::fisher(rate);
        if (rxn == oracle::Rxn::linear) coeffs.reaction = ReactionSpec::linear(rate);
        const FieldState u = FieldState::from_values(grid, to_std(random_vector(rng, static_cast<Eigen::Index>(n), -1.0, 1.0)));

        const FieldState via_block = gen_conv1d(coeffs, grid).forward(u);
        const FieldState via_solver = step_explicit(u, coeffs, grid);
        const auto via_loop = oracle::explicit_step(to_std(u), coeffs.a, bc, grid.ratio(), grid.k, rxn, rate);
        conv_vs_solver = std::max(conv_vs_solver, max_abs_diff(via_block.values(), via_solver.values()));
        conv_vs_loop = std::max(conv_vs_loop, max_abs_diff(via_block.values(), via_loop));
    }
    res.checks.push_back(at_most("conv1d forward vs step_explicit, 100 fields", conv_vs_solver, 1e-12));
    res.checks.push_back(at_most("conv1d forward vs loop oracle, 100 fields", conv_vs_loop, 1e-12));

    double conv2d = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const GridSpec grid = make_grid(24, 0.1, 0.002, bcs[seed % 4], 2);
        const double a = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        const FieldState u = FieldState::from_values(grid, to_std(random_vector(rng, 24 * 24, -1.0, 1.0)));
        const Conv2DBlock block = gen_conv2d(laplacian_2d_9pt().scaled(a * grid.ratio()), 1, grid.bc);
        const FieldState step = step_explicit(u, EllipticCoefficients::constant(grid, a), grid);
        conv2d = std::max(conv2d, max_abs_diff(block.forward(u).values(), step.values()));
    }
    res.checks.push_back(at_most("conv2d forward vs 2D step_explicit", conv2d, 1e-12));

    double dense_paths = 0.0, dense_loop = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(2000 + seed);
        std::uniform_int_distribution<Eigen::Index> size(1, 64);
        const Eigen::Index l = size(rng), m = size(rng);
        const DenseBlock block = gen_dense(random_matrix(rng, l, m), random_vector(rng, l, -1.0, 1.0),
                                           seed % 2 ? ReactionSpec::sigmoid(1.0) : ReactionSpec::none());
        const Vector u = random_vector(rng, m, -1.0, 1.0);
        const Vector direct = block.forward(u);
        dense_paths = std::max(dense_paths, (direct - block.forward_channels(u)).cwiseAbs().maxCoeff());
        const auto loop = oracle::dense(to_rows(block.w), to_std(block.bias), to_std(u));
        dense_loop = std::max(dense_loop, max_abs_diff(block.pre_activation(u), loop));
    }
    res.checks.push_back(at_most("dense matrix path vs channel path", dense_paths, 1e-12));
    res.checks.push_back(at_most("dense pre-activation vs loop oracle", dense_loop, 1e-12));

    double rnn = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        std::mt19937_64 rng(3000 + seed);
        const std::size_t n = 16;
        const GridSpec grid = make_grid(n, 0.1, 0.001, bcs[seed % 4]);
        const double dxy = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double dz = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double v = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
        const RNNCell cell = gen_rnn_cell(dxy, dz, v, grid);
        Vector state = random_vector(rng, 2 * static_cast<Eigen::Index>(n), -1.0, 1.0);
        oracle::Vec cur = to_std(Vector(state.head(n))), prev = to_std(Vector(state.tail(n)));
        for (int step = 0; step < 100; ++step) {
            const Vector f = random_vector(rng, static_cast<Eigen::Index>(n), -1.0, 1.0);
            state = rnn_forward(cell, state, f);
            oracle::Vec next = oracle::rnn_step(cur, prev, to_std(f), dxy, dz, v, grid.h, grid.k, grid.bc);
            prev = std::move(cur);
            cur = std::move(next);
            const double scale = std::max(1.0, state.cwiseAbs().maxCoeff());
            rnn = std::max(rnn, max_abs_diff(Vector(state.head(n)), cur) / scale);
            rnn = std::max(rnn, max_abs_diff(Vector(state.tail(n)), prev) / scale);
        }
    }
    res.checks.push_back(at_most("rnn_forward vs scalar recurrence, 100 steps", rnn, 1e-10));
}

void gradients(CriterionResult& res) {
    {
        const Pipeline model({DenseStage{3, 5, ReactionSpec::sigmoid(1.0)}, DenseStage{5, 2, ReactionSpec::sigmoid(1.0)}});
        std::mt19937_64 rng(11);
        ThetaVector theta = model.init_theta(5);
        theta.values *= 3.0;
        const Sample sample{random_vector(rng, 3, -1.0, 1.0), random_vector(rng, 2, 0.0, 1.0)};
        LossSpec loss;
        loss.nu = 1e-3;
        const Vector g = pipeline_gradient(model, sample, loss, theta);
        const Vector fd = grad_fd(
            [&](const Vector& v) { return pipeline_loss(model, sample, loss, ThetaVector{v, theta.layout}); },
            theta.values, 1e-6);
        res.checks.push_back(at_most("dense 2-layer sigmoid, relative error", gradient_error(g, fd), 1e-5));
    }
    {
        const std::size_t n = 12;
        const GridSpec grid = make_grid(n, 0.1, 0.002, BoundaryCondition::dirichlet(0.2));
        const Pipeline model({DiffusionStage{grid, 3, ReactionSpec::none(), false}});
        std::mt19937_64 rng(13);
        const ThetaVector theta = model.init_theta(17);
        const Sample sample{random_vector(rng, n, 0.0, 1.0), random_vector(rng, n, 0.0, 1.0)};
        LossSpec loss;
        loss.nu = 1e-3;
        const Vector g = pipeline_gradient(model, sample, loss, theta);
        const Vector fd = grad_fd(
            [&](const Vector& v) { return pipeline_loss(model, sample, loss, ThetaVector{v, theta.layout}); },
            theta.values, 1e-6);
        res.checks.push_back(at_most("3-step learnable-A diffusion, relative error", gradient_error(g, fd), 1e-5));
    }
}

void optimizers(CriterionResult& res) {
    std::mt19937_64 rng(21);
    {
        const Matrix j = random_matrix(rng, 20, 5);
        const Vector t = random_vector(rng, 20, -1.0, 1.0);
        const ThetaVector theta0 = ThetaVector::flat(random_vector(rng, 5, -1.0, 1.0));
        const SecondOrderStep step = gauss_newton_step(theta0, j * theta0.values - t, j, 1.0);
        const Vector grad = j.transpose() * (j * step.theta.values - t);
        res.checks.push_back(at_most("gauss-newton one-step residual gradient", grad.cwiseAbs().maxCoeff(), 1e-10));
        const auto ls = oracle::least_squares(to_rows(j), to_std(t));
        res.checks.push_back(at_most("gauss-newton vs normal-equation oracle", max_abs_diff(step.theta.values, ls), 1e-10));
    }
    {
        const Matrix q = random_matrix(rng, 5, 5);
        const Matrix h = q.transpose() * q + Matrix::Identity(5, 5);
        const Vector b = random_vector(rng, 5, -1.0, 1.0);
        const ThetaVector theta0 = ThetaVector::flat(random_vector(rng, 5, -1.0, 1.0));
        const SecondOrderStep step = newton_pinv_step(theta0, h * theta0.values - b, h, 1.0);
        const auto minimizer = oracle::solve(to_rows(h), to_std(b));
        res.checks.push_back(at_most("newton eta=1 vs quadratic minimizer", max_abs_diff(step.theta.values, minimizer),
                                     1e-10));
    }
    {
        Vector g(8);
        for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = (rng() & 1U) ? 1.0 : -1.0;
        const ThetaVector theta0 = ThetaVector::flat(random_vector(rng, 8, -1.0, 1.0));
        const AdamState fresh = AdamState::fresh(8);
        const AdamResult res_adam = adam_step(fresh, theta0, g);
        const Vector expected = -(fresh.eta / (1.0 + fresh.eps)) * g;
        const Vector delta = res_adam.theta.values - theta0.values;
        res.checks.push_back(at_most("adam fresh step vs eta/(1+eps) sign(g)", (delta - expected).cwiseAbs().maxCoeff(),
                                     1e-12));
    }
    {
        const Matrix q = random_matrix(rng, 3, 3);
        const Matrix h = q.transpose() * q + 0.5 * Matrix::Identity(3, 3);
        LBFGSState state;
        std::vector<std::pair<oracle::Vec, oracle::Vec>> pairs;
        for (int i = 0; i < 4; ++i) {
            const Vector s = random_vector(rng, 3, -1.0, 1.0);
            const Vector y = h * s;
            if (state.push(s, y)) pairs.emplace_back(to_std(s), to_std(y));
        }
        const Vector g = random_vector(rng, 3, -1.0, 1.0);
        const Vector d = lbfgs_direction(state, g);
        const auto dense = oracle::bfgs_direction(pairs, to_std(g));
        res.checks.push_back(at_most("l-bfgs direction vs dense BFGS", max_abs_diff(d, dense), 1e-8));
    }
}

void xor_training(CriterionResult& res) {
    const Pipeline model({DenseStage{2, 4, ReactionSpec::sigmoid(1.0)}, DenseStage{4, 1, ReactionSpec::sigmoid(1.0)}});
    Dataset data;
    for (auto [a, b] : {std::pair{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}) {
        Sample s{Vector(2), Vector(1)};
        s.input << a, b;
        s.target << (a != b ? 1.0 : 0.0);
        data.samples.push_back(std::move(s));
    }
    OptimizerConfig opt;
    opt.kind = OptimizerKind::adam;
    opt.eta = kXorLearningRate;
    int reached = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        TrainOptions options;
        options.seed = seed;
        options.max_epochs = 5000;
        options.target_loss = 0.05;
        const TrainReport report = train_supervised(model, data, LossSpec{}, opt, options);
        if (report.converged && report.final_loss() < 0.05) ++reached;
    }
    res.checks.push_back(at_least("XOR seeds reaching loss < 0.05 in 5000 epochs (of 5)", reached, 4));
}

void stability(CriterionResult& res) {
    std::mt19937_64 rng(31);
    const std::size_t n = 64;
    const double h = 0.1;
    const FieldState u0(1, n, to_std(random_vector(rng, static_cast<Eigen::Index>(n), 0.0, 1.0)));

    const GridSpec unstable = make_grid(n, h, 0.6 * h * h, BoundaryCondition::periodic());
    double diverged_at = 1e300;
    try {
        solve_forward(u0, EllipticCoefficients::constant(unstable, 1.0), unstable, 200, Scheme::explicit_euler);
    } catch (const DivergenceError& e) {
        diverged_at = e.step() ? static_cast<double>(*e.step() + 1) : 0.0;
    }
    res.checks.push_back(at_most("explicit r=0.6 divergence detected at step", diverged_at, 200));

    const GridSpec stiff = make_grid(n, h, 5.0 * h * h, BoundaryCondition::periodic());
    const Trajectory traj = solve_forward(u0, EllipticCoefficients::constant(stiff, 1.0), stiff, 100, Scheme::implicit_euler);
    double peak = 0.0;
    for (const auto& s : traj.slices) peak = std::max(peak, s.max_abs());
    res.checks.push_back(at_most("implicit r=5 max|u| / initial max|u| over 100 steps", peak / u0.max_abs(), 1.0));
}

double sum_drift(const FieldState& u0, const EllipticCoefficients& coeffs, const GridSpec& grid) {
    FieldState u = u0;
    for (int s = 0; s < 1000; ++s) u = step_explicit(u, coeffs, grid);
    return std::abs(u.sum() - u0.sum()) / std::abs(u0.sum());
}

void conservation(CriterionResult& res) {
    std::mt19937_64 rng(41);
    const double h = 0.1;
    {
        const GridSpec grid = make_grid(100, h, 0.25 * h * h, BoundaryCondition::periodic());
        const FieldState u0 = FieldState::from_values(grid, to_std(random_vector(rng, 100, 0.0, 1.0)));
        res.checks.push_back(at_most("1D constant A, relative sum drift",
                                     sum_drift(u0, EllipticCoefficients::constant(grid, 1.0), grid), 1e-10));
        EllipticCoefficients varying;
        varying.a = to_std(random_vector(rng, 100, 0.2, 1.0));
        varying.b.assign(100, 0.0);
        res.checks.push_back(at_most("1D varying A, relative sum drift", sum_drift(u0, varying, grid), 1e-10));
    }
    for (Laplacian2D kind : {Laplacian2D::five_point, Laplacian2D::nine_point}) {
        const GridSpec grid = make_grid(32, h, 0.1 * h * h, BoundaryCondition::periodic(), 2);
        const FieldState u0 = FieldState::from_values(grid, to_std(random_vector(rng, 32 * 32, 0.0, 1.0)));
        EllipticCoefficients varying;
        varying.a = to_std(random_vector(rng, 32 * 32, 0.2, 1.0));
        varying.b.assign(32 * 32, 0.0);
        varying.laplacian = kind;
        const std::string name = kind == Laplacian2D::five_point ? "2D 5-point" : "2D 9-point";
        res.checks.push_back(at_most(name + " varying A, relative sum drift", sum_drift(u0, varying, grid), 1e-10));
    }
}

double variance(const FieldState& f) {
    const double mean = f.sum() / static_cast<double>(f.size());
    double acc = 0.0;
    for (double x : f.values()) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(f.size());
}

void turing(CriterionResult& res) {
    const std::size_t n = 128;
    const GridSpec grid = make_grid(n, kGrayScottH, kGrayScottK, BoundaryCondition::periodic(), 2);
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<double> u(grid.size(), 1.0), v(grid.size(), 0.0);
    const std::size_t lo = n / 2 - kGrayScottPatch / 2, hi = lo + kGrayScottPatch;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t idx = i * n + j;
            if (i >= lo && i < hi && j >= lo && j < hi) {
                u[idx] = 0.5;
                v[idx] = 0.25;
            }
            u[idx] += noise(rng);
            v[idx] += noise(rng);
        }
    }
    TwoComponentState state{FieldState(2, n, std::move(u)), FieldState(2, n, std::move(v))};
    const double initial = variance(state.v);
    const auto rxn = TwoComponentReaction::gray_scott(0.04, 0.06);
    for (std::size_t s = 0; s < kGrayScottSteps; ++s) state = step_two_component(state, 2e-5, 1e-5, rxn, grid);
    res.checks.push_back(at_least("Gray-Scott V variance final / initial", variance(state.v) / initial, 10.0));
}

struct Entry {
    const char* title;
    double budget;
    void (*run)(CriterionResult&);
};

const std::array<Entry, kCriterionCount> kEntries{{
    {"stencil fidelity", 1.0, stencil_fidelity},
    {"heat-kernel convergence", 10.0, heat_kernel},
    {"Fisher front speed", 30.0, fisher_front},
    {"generator/solver equivalence", 5.0, equivalence},
    {"gradient exactness", 10.0, gradients},
    {"optimizer contracts", 5.0, optimizers},
    {"XOR training", 60.0, xor_training},
    {"stability dichotomy", 5.0, stability},
    {"conservation", 5.0, conservation},
    {"Turing pattern", 120.0, turing},
}};

} // namespace

bool CriterionResult::passed() const {
    if (checks.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

CriterionResult run_criterion(int id) {
    if (id < 1 || id > kCriterionCount) throw std::invalid_argument("unknown criterion " + std::to_string(id));
    const Entry& e = kEntries[static_cast<std::size_t>(id - 1)];
    CriterionResult res;
    res.id = id;
    res.title = e.title;
    res.budget_seconds = e.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
        e.run(res);
    } catch (const std::exception& ex) {
        res.checks.push_back({std::string("unexpected error: ") + ex.what(), 0.0, "no exception", false});
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.checks.push_back(at_most("runtime seconds", res.seconds, e.budget));
    return res;
}

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "stencils") return {1};
    if (suite == "equivalence") return {4};
    if (suite == "gradients") return {5, 6, 7};
    if (suite == "oracles") return {2, 3, 8, 9, 10};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    throw std::invalid_argument("unknown suite '" + suite + "' (expected stencils, equivalence, gradients, oracles, all)");
}

void print_checks(std::ostream& out, const CriterionResult& result) {
    for (const Check& c : result.checks) {
        out << (c.passed ? "PASS" : "FAIL") << " [" << result.id << " " << result.title << "] " << c.name
            << " measured=" << format_double(c.measured) << " tolerance " << c.bound << '\n';
    }
}

bool run_suite(const std::string& suite, std::ostream& out) {
    bool ok = true;
    for (int id : suite_criteria(suite)) {
        const CriterionResult r = run_criterion(id);
        print_checks(out, r);
        ok = ok && r.passed();
    }
    return ok;
}

} // namespace npde::verify
