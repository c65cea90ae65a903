#include "npde/optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "npde/error.hpp"

namespace npde {

namespace {

void require_same_size(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size()) {
        throw ShapeError(std::string(what) + ": size mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
}

ThetaVector with_values(const ThetaVector& theta, Vector values) {
    return ThetaVector{std::move(values), theta.layout};
}

// (N + μ I) x = rhs for symmetric positive semi-definite N.
Vector regularized_solve(const Matrix& normal, const Vector& rhs, double mu) {
    const Eigen::Index n = normal.rows();
    Matrix m = normal;
    m.diagonal().array() += mu;
    Eigen::LDLT<Matrix> ldlt(m);
    if (ldlt.info() != Eigen::Success) throw SingularSystemError("normal-equation factorization failed");
    Vector x = ldlt.solve(rhs);
    if (!x.allFinite()) {
        throw SingularSystemError("normal-equation solve produced non-finite values (n=" + std::to_string(n) + ")");
    }
    return x;
}

} // namespace

std::size_t ThetaLayout::add(std::string module, std::string block, std::string tensor, std::size_t size) {
    const std::size_t offset = total_;
    ranges_.push_back(ParamRange{std::move(module), std::move(block), std::move(tensor), offset, size});
    total_ += size;
    return offset;
}

const ParamRange& ThetaLayout::find(const std::string& block, const std::string& tensor) const {
    for (const auto& r : ranges_) {
        if (r.block == block && r.tensor == tensor) return r;
    }
    throw std::out_of_range("no parameter tensor '" + block + "." + tensor + "'");
}

void ThetaLayout::validate() const {
    std::size_t expected = 0;
    for (const auto& r : ranges_) {
        if (r.offset != expected) throw std::logic_error("theta layout ranges overlap or leave a gap");
        expected += r.size;
    }
    if (expected != total_) throw std::logic_error("theta layout does not cover the vector");
}

bool ThetaLayout::operator==(const ThetaLayout& other) const {
    if (total_ != other.total_ || ranges_.size() != other.ranges_.size()) return false;
    for (std::size_t i = 0; i < ranges_.size(); ++i) {
        const auto& a = ranges_[i];
        const auto& b = other.ranges_[i];
        if (a.module != b.module || a.block != b.block || a.tensor != b.tensor || a.offset != b.offset ||
            a.size != b.size) {
            return false;
        }
    }
    return true;
}

ThetaVector ThetaVector::flat(Vector values) {
    ThetaVector t;
    t.layout.add("flat", "theta", "values", static_cast<std::size_t>(values.size()));
    t.values = std::move(values);
    return t;
}

Eigen::Map<const Vector> ThetaVector::view(const std::string& block, const std::string& tensor) const {
    const ParamRange& r = layout.find(block, tensor);
    return {values.data() + r.offset, static_cast<Eigen::Index>(r.size)};
}

Eigen::Map<Vector> ThetaVector::view(const std::string& block, const std::string& tensor) {
    const ParamRange& r = layout.find(block, tensor);
    return {values.data() + r.offset, static_cast<Eigen::Index>(r.size)};
}

void LossSpec::validate() const {
    if (!(nu >= 0.0) || !(beta >= 0.0) || !(lambda >= 0.0)) {
        throw std::invalid_argument("loss weights nu, beta, lambda must be >= 0");
    }
}

LossValue l2_loss(const Vector& output, const Vector& target, const Vector& weights, double nu) {
    require_same_size(output, target, "l2_loss");
    if (!(nu >= 0.0)) throw std::invalid_argument("l2_loss: nu must be >= 0");
    LossValue out;
    out.grad_output = output - target;
    out.loss = 0.5 * (out.grad_output.squaredNorm() + nu * weights.squaredNorm());
    return out;
}

double pde_constrained_loss(const Vector& u, const Vector& u_hat, const ThetaVector& theta, double beta,
                            const Vector& residual, double lambda) {
    require_same_size(u, u_hat, "pde_constrained_loss");
    if (!(beta >= 0.0) || !(lambda >= 0.0)) {
        throw std::invalid_argument("pde_constrained_loss: beta and lambda must be >= 0");
    }
    return 0.5 * (u - u_hat).squaredNorm() + 0.5 * beta * theta.values.squaredNorm() +
           0.5 * lambda * residual.squaredNorm();
}

Vector discrete_residual(const Trajectory& trajectory, const EllipticCoefficients& coeffs) {
    const GridSpec& grid = trajectory.grid;
    const std::size_t n = grid.size();
    Vector r(static_cast<Eigen::Index>(n * trajectory.steps()));
    for (std::size_t s = 0; s + 1 < trajectory.slices.size(); ++s) {
        const FieldState& cur = trajectory.slices[s];
        const FieldState& next = trajectory.slices[s + 1];
        const FieldState op = elliptic_apply(cur, coeffs, grid);
        for (std::size_t i = 0; i < n; ++i) {
            r[static_cast<Eigen::Index>(s * n + i)] = (next[i] - cur[i]) / grid.k - op[i];
        }
    }
    return r;
}

ThetaVector sgd_step(const ThetaVector& theta, const Vector& g, double eta) {
    require_same_size(theta.values, g, "sgd_step");
    if (!(eta > 0.0)) throw std::invalid_argument("sgd_step: eta must be positive");
    return with_values(theta, theta.values - eta * g);
}

AdamState AdamState::fresh(std::size_t n, double eta, double beta1, double beta2, double eps) {
    AdamState s;
    s.m = Vector::Zero(static_cast<Eigen::Index>(n));
    s.v = Vector::Zero(static_cast<Eigen::Index>(n));
    s.eta = eta;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    s.validate();
    return s;
}

void AdamState::validate() const {
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw std::invalid_argument("adam: beta1 and beta2 must lie in [0, 1)");
    }
    if (!(eps > 0.0)) throw std::invalid_argument("adam: eps must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("adam: eta must be positive");
    if (m.size() != v.size()) throw ShapeError("adam: moment vectors differ in size");
}

AdamResult adam_step(const AdamState& state, const ThetaVector& theta, const Vector& g) {
    state.validate();
    require_same_size(theta.values, g, "adam_step");
    require_same_size(state.m, g, "adam_step");

    AdamResult out{state, theta};
    AdamState& s = out.state;
    s.m = s.beta1 * state.m + (1.0 - s.beta1) * g;
    s.v = s.beta2 * state.v + (1.0 - s.beta2) * g.cwiseProduct(g);
    const double t_next = static_cast<double>(state.t + 1);
    const double c1 = 1.0 - std::pow(s.beta1, t_next);
    const double c2 = 1.0 - std::pow(s.beta2, t_next);
    const Vector m_hat = s.m / c1;
    const Vector v_hat = s.v / c2;
    out.theta.values = theta.values - s.eta * (m_hat.array() / (v_hat.array().sqrt() + s.eps)).matrix();
    s.t = state.t + 1;
    return out;
}

double spd_condition(const Matrix& m) {
    if (m.rows() == 0) return 1.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

SecondOrderStep newton_pinv_step(const ThetaVector& theta, const Vector& g, const Matrix& h, double eta) {
    const Eigen::Index n = theta.values.size();
    if (h.rows() != n || h.cols() != n) throw ShapeError("newton_pinv_step: H must be square and sized to theta");
    require_same_size(theta.values, g, "newton_pinv_step");
    const Matrix hh = h.transpose() * h;
    const double mu = n > 0 ? 1e-12 * hh.trace() / static_cast<double>(n) : 0.0;
    SecondOrderStep out{theta, spd_condition(hh), false};
    out.damped = !(out.condition <= kConditionLimit);
    out.theta.values = theta.values - eta * regularized_solve(hh, h.transpose() * g, mu);
    return out;
}

SecondOrderStep gauss_newton_step(const ThetaVector& theta, const Vector& residuals, const Matrix& j, double eta) {
    const Eigen::Index n = theta.values.size();
    if (j.cols() != n || j.rows() != residuals.size()) throw ShapeError("gauss_newton_step: J shape mismatch");
    if (j.rows() < j.cols()) throw ShapeError("gauss_newton_step: J must have at least as many rows as columns");
    const Matrix jtj = j.transpose() * j;
    SecondOrderStep out{theta, spd_condition(jtj), false};
    double mu = 0.0;
    if (!(out.condition <= kConditionLimit)) {
        out.damped = true;
        mu = n > 0 ? 1e-12 * jtj.trace() / static_cast<double>(n) : 0.0;
        if (mu == 0.0) mu = 1e-300;
    }
    out.theta.values = theta.values - eta * regularized_solve(jtj, j.transpose() * residuals, mu);
    return out;
}

bool LBFGSState::push(Vector s, Vector y) {
    require_same_size(s, y, "lbfgs push");
    const double sy = s.dot(y);
    if (!(sy > 0.0) || !std::isfinite(sy) || !(y.squaredNorm() > 0.0)) return false;
    if (!history.empty() && history.front().s.size() != s.size()) throw ShapeError("lbfgs: pair size changed");
    history.push_back(Pair{std::move(s), std::move(y)});
    while (history.size() > std::max<std::size_t>(memory, 1)) history.pop_front();
    return true;
}

Vector lbfgs_direction(const LBFGSState& state, const Vector& g) {
    if (state.history.empty()) return -g;
    const std::size_t m = state.history.size();
    std::vector<double> alpha(m), rho(m);
    Vector q = g;
    for (std::size_t i = m; i-- > 0;) {
        const auto& p = state.history[i];
        rho[i] = 1.0 / p.y.dot(p.s);
        alpha[i] = rho[i] * p.s.dot(q);
        q -= alpha[i] * p.y;
    }
    const auto& newest = state.history.back();
    const double gamma = newest.s.dot(newest.y) / newest.y.dot(newest.y);
    Vector r = gamma * q;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = state.history[i];
        const double beta = rho[i] * p.y.dot(r);
        r += (alpha[i] - beta) * p.s;
    }
    return -r;
}

Vector grad_fd(const std::function<double(const Vector&)>& loss_fn, const Vector& theta, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("grad_fd: eps must be positive");
    Vector g(theta.size());
    Vector probe = theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + eps;
        const double plus = loss_fn(probe);
        probe[i] = orig - eps;
        const double minus = loss_fn(probe);
        probe[i] = orig;
        if (!std::isfinite(plus) || !std::isfinite(minus)) {
            throw DivergenceError("grad_fd: non-finite loss at coordinate " + std::to_string(i),
                                  static_cast<std::size_t>(i));
        }
        g[i] = (plus - minus) / (2.0 * eps);
    }
    return g;
}

} // namespace npde
