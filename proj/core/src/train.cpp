#include "npde/train.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "npde/error.hpp"
#include "npde/io.hpp"

namespace npde {

namespace {

std::size_t training_count(const Dataset& d) {
    const auto n = d.samples.size();
    const auto held = static_cast<std::size_t>(std::floor(d.validation_fraction * static_cast<double>(n)));
    return n - std::min(held, n);
}

bool diverged(double loss) { return !std::isfinite(loss) || loss > kLossDivergence; }

// Central differences of the exact gradient, symmetrized.
Matrix numerical_hessian(const Pipeline& model, const std::vector<Sample>& samples, const LossSpec& loss,
                         const ThetaVector& theta) {
    const Eigen::Index n = theta.values.size();
    Matrix h(n, n);
    ThetaVector probe = theta;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double step = 1e-5 * std::max(1.0, std::abs(theta.values[i]));
        probe.values[i] = theta.values[i] + step;
        const Vector gp = dataset_loss_and_gradient(model, samples, loss, probe).gradient;
        probe.values[i] = theta.values[i] - step;
        const Vector gm = dataset_loss_and_gradient(model, samples, loss, probe).gradient;
        probe.values[i] = theta.values[i];
        h.col(i) = (gp - gm) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose());
}

// Residual vector [f(x_s) − t_s ...; sqrt(decay) θ] and its Jacobian.
std::pair<Vector, Matrix> stacked_residuals(const Pipeline& model, const std::vector<Sample>& samples,
                                            const LossSpec& loss, const ThetaVector& theta) {
    const Eigen::Index p = theta.values.size();
    Eigen::Index rows = 0;
    for (const auto& s : samples) rows += s.target.size();
    const double decay = loss.decay();
    if (decay > 0.0) rows += p;
    Vector r(rows);
    Matrix j(rows, p);
    Eigen::Index at = 0;
    for (const auto& s : samples) {
        const Eigen::Index m = s.target.size();
        r.segment(at, m) = model.forward(theta, s.input) - s.target;
        j.middleRows(at, m) = model.jacobian(theta, s.input);
        at += m;
    }
    if (decay > 0.0) {
        const double w = std::sqrt(decay);
        r.segment(at, p) = w * theta.values;
        j.middleRows(at, p) = w * Matrix::Identity(p, p);
    }
    return {r, j};
}

} // namespace

std::vector<Sample> Dataset::training() const {
    return {samples.begin(), samples.begin() + static_cast<long>(training_count(*this))};
}

std::vector<Sample> Dataset::validation() const {
    return {samples.begin() + static_cast<long>(training_count(*this)), samples.end()};
}

void Dataset::validate(std::size_t n_inputs, std::size_t n_targets) const {
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
        throw std::invalid_argument("validation fraction must lie in [0, 1)");
    }
    if (training_count(*this) == 0) throw std::invalid_argument("dataset has no training samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if ((n_inputs && static_cast<std::size_t>(s.input.size()) != n_inputs) ||
            (n_targets && static_cast<std::size_t>(s.target.size()) != n_targets)) {
            throw ShapeError("sample " + std::to_string(i) + " does not match the model's input/output sizes");
        }
        if (!s.input.allFinite() || !s.target.allFinite()) {
            throw std::invalid_argument("sample " + std::to_string(i) + " contains non-finite values");
        }
    }
}

Dataset Dataset::from_csv(const std::filesystem::path& path, std::size_t n_inputs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
    Dataset d;
    for (const auto& row : read_csv_rows(in)) {
        if (row.size() <= n_inputs) {
            throw std::invalid_argument("dataset '" + path.string() + "': row has no target columns");
        }
        Sample s;
        s.input = Eigen::Map<const Vector>(row.data(), static_cast<Eigen::Index>(n_inputs));
        s.target = Eigen::Map<const Vector>(row.data() + n_inputs, static_cast<Eigen::Index>(row.size() - n_inputs));
        d.samples.push_back(std::move(s));
    }
    if (d.samples.empty()) throw std::invalid_argument("dataset '" + path.string() + "' is empty");
    return d;
}

std::string to_string(OptimizerKind kind) {
    switch (kind) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::newton: return "newton";
    case OptimizerKind::gauss_newton: return "gauss_newton";
    case OptimizerKind::lbfgs: return "lbfgs";
    }
    return "unknown";
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "adam") return OptimizerKind::adam;
    if (name == "newton" || name == "pinv" || name == "newton_pinv") return OptimizerKind::newton;
    if (name == "gauss_newton") return OptimizerKind::gauss_newton;
    if (name == "lbfgs") return OptimizerKind::lbfgs;
    throw std::invalid_argument("unknown optimizer '" + name + "'");
}

void OptimizerConfig::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("optimizer eta must be positive");
    if (kind == OptimizerKind::adam) AdamState::fresh(0, eta, beta1, beta2, eps);
    if (kind == OptimizerKind::lbfgs && memory < 1) throw std::invalid_argument("lbfgs memory must be >= 1");
}

std::string to_string(StopReason reason) {
    switch (reason) {
    case StopReason::target_loss: return "target_loss";
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::divergence: return "divergence";
    }
    return "unknown";
}

TrainReport train_supervised(const Pipeline& model, const Dataset& data, const LossSpec& loss,
                             const OptimizerConfig& opt, const TrainOptions& options) {
    loss.validate();
    opt.validate();
    if (options.max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
    data.validate(model.input_size(), model.output_size());

    // Steps 1-2: boundary handling lives in the stages; θ from the seed
    ThetaVector theta = options.initial_theta ? *options.initial_theta : model.init_theta(options.seed);
    if (!(theta.layout == model.layout())) throw ShapeError("initial theta does not match the pipeline layout");
    model.check_stability(theta);

    const std::vector<Sample> train = data.training();
    TrainReport report;
    auto record = [&report](double l) {
        report.loss_curve.push_back(l);
        const double best = report.best_loss.empty() ? l : std::min(report.best_loss.back(), l);
        report.best_loss.push_back(best);
    };
    auto evaluate = [&](const ThetaVector& t) -> std::optional<LossAndGradient> {
        try {
            LossAndGradient lg = dataset_loss_and_gradient(model, train, loss, t);
            if (diverged(lg.loss) || !lg.gradient.allFinite()) return std::nullopt;
            return lg;
        } catch (const DivergenceError&) {
            return std::nullopt;
        }
    };

    AdamState adam = AdamState::fresh(theta.size(), opt.eta, opt.beta1, opt.beta2, opt.eps);
    LBFGSState lbfgs;
    lbfgs.memory = opt.memory;

    // Step 3 on the initial θ
    std::optional<LossAndGradient> current = evaluate(theta);
    if (!current) {
        report.final_theta = theta;
        report.stop_reason = StopReason::divergence;
        report.loss_curve.push_back(std::numeric_limits<double>::infinity());
        report.best_loss.push_back(std::numeric_limits<double>::infinity());
        return report;
    }
    if (current->loss <= options.target_loss) {
        record(current->loss);
        report.final_theta = theta;
        report.converged = true;
        report.stop_reason = StopReason::target_loss;
    } else {
        for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
            // Step 4
            ThetaVector next;
            switch (opt.kind) {
            case OptimizerKind::sgd: next = sgd_step(theta, current->gradient, opt.eta); break;
            case OptimizerKind::adam: {
                AdamResult res = adam_step(adam, theta, current->gradient);
                adam = std::move(res.state);
                next = std::move(res.theta);
                break;
            }
            case OptimizerKind::newton: {
                const Matrix h = numerical_hessian(model, train, loss, theta);
                next = newton_pinv_step(theta, current->gradient, h, opt.eta).theta;
                break;
            }
            case OptimizerKind::gauss_newton: {
                const auto [r, j] = stacked_residuals(model, train, loss, theta);
                next = gauss_newton_step(theta, r, j, opt.eta).theta;
                break;
            }
            case OptimizerKind::lbfgs: {
                const Vector d = lbfgs_direction(lbfgs, current->gradient);
                next = ThetaVector{theta.values + opt.eta * d, theta.layout};
                break;
            }
            }

            // Step 3 for the updated θ, then Step 5
            std::optional<LossAndGradient> updated =
                next.values.allFinite() ? evaluate(next) : std::optional<LossAndGradient>{};
            if (!updated) {
                record(std::numeric_limits<double>::infinity());
                report.stop_reason = StopReason::divergence;
                break;
            }
            if (opt.kind == OptimizerKind::lbfgs) {
                lbfgs.push(next.values - theta.values, updated->gradient - current->gradient);
            }
            theta = std::move(next);
            current = std::move(updated);
            record(current->loss);
            if (current->loss <= options.target_loss) {
                report.converged = true;
                report.stop_reason = StopReason::target_loss;
                break;
            }
        }
        report.final_theta = theta;
    }

    const std::vector<Sample> held = data.validation();
    if (!held.empty()) {
        LossSpec data_only = loss;
        data_only.nu = 0.0;
        data_only.beta = 0.0;
        report.validation_loss = dataset_loss(model, held, data_only, report.final_theta);
    }
    return report;
}

void write_loss_curve_csv(std::ostream& out, const TrainReport& report) {
    out << "epoch,loss\n";
    for (std::size_t i = 0; i < report.loss_curve.size(); ++i) {
        out << (i + 1) << ',' << format_double(report.loss_curve[i]) << '\n';
    }
}

std::string summary_line(const TrainReport& report) {
    return "epochs=" + std::to_string(report.epochs()) + " loss=" + format_double(report.final_loss()) +
           " converged=" + (report.converged ? "true" : "false");
}

} // namespace npde
