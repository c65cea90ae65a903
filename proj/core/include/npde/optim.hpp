#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "npde/linalg.hpp"
#include "npde/solver.hpp"

namespace npde {

struct ParamRange {
    std::string module;
    std::string block;
    std::string tensor;
    std::size_t offset = 0;
    std::size_t size = 0;
};

/// Ordered, disjoint, gap-free map from (module, block, tensor) to slices of θ.
class ThetaLayout {
public:
    /// Appends a range and returns its offset.
    std::size_t add(std::string module, std::string block, std::string tensor, std::size_t size);

    const std::vector<ParamRange>& ranges() const { return ranges_; }
    std::size_t total() const { return total_; }
    const ParamRange& find(const std::string& block, const std::string& tensor) const;
    /// Throws unless the ranges are disjoint and cover [0, total) in order.
    void validate() const;

    bool operator==(const ThetaLayout&) const;

private:
    std::vector<ParamRange> ranges_;
    std::size_t total_ = 0;
};

struct ThetaVector {
    Vector values;
    ThetaLayout layout;

    static ThetaVector flat(Vector values);

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
    Eigen::Map<const Vector> view(const std::string& block, const std::string& tensor) const;
    Eigen::Map<Vector> view(const std::string& block, const std::string& tensor);
};

enum class LossKind { l2_decay, pde_constrained };

struct LossSpec {
    LossKind kind = LossKind::l2_decay;
    double nu = 0.0;     // weight decay (l2_decay)
    double beta = 0.0;   // Tikhonov weight on θ (pde_constrained)
    double lambda = 0.0; // residual penalty (pde_constrained)

    /// Coefficient of ½‖θ‖² in the objective.
    double decay() const { return kind == LossKind::l2_decay ? nu : beta; }
    void validate() const;
};

struct LossValue {
    double loss = 0.0;
    Vector grad_output;
};

/// ½(‖output − target‖² + ν‖weights‖²), gradient w.r.t. output is output − target.
LossValue l2_loss(const Vector& output, const Vector& target, const Vector& weights, double nu);

/// ½‖u − û‖² + (β/2)‖θ‖² + (λ/2)‖residual‖²
double pde_constrained_loss(const Vector& u, const Vector& u_hat, const ThetaVector& theta, double beta,
                            const Vector& residual, double lambda);

/// Stacked discrete residual (u^{n+1} − u^n)/k − O_L u^n over every step of
/// the trajectory. Zero (to rounding) for trajectories from explicit steps.
Vector discrete_residual(const Trajectory& trajectory, const EllipticCoefficients& coeffs);

ThetaVector sgd_step(const ThetaVector& theta, const Vector& g, double eta);

struct AdamState {
    Vector m;
    Vector v;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double eta = 0.001;
    std::size_t t = 0;

    static AdamState fresh(std::size_t n, double eta = 0.001, double beta1 = 0.9, double beta2 = 0.999,
                           double eps = 1e-8);
    void validate() const;
};

struct AdamResult {
    AdamState state;
    ThetaVector theta;
};

AdamResult adam_step(const AdamState& state, const ThetaVector& theta, const Vector& g);

struct SecondOrderStep {
    ThetaVector theta;
    /// Condition number estimate of the normal matrix that was solved.
    double condition = 1.0;
    /// True when damping was added because the normal matrix was ill-conditioned.
    bool damped = false;
};

/// Threshold above which normal matrices count as ill-conditioned.
inline constexpr double kConditionLimit = 1e12;

/// θ − η (H*H)^{-1} H* g, solved as (H*H + μI) x = H* g with μ = 1e-12 tr(H*H)/n.
SecondOrderStep newton_pinv_step(const ThetaVector& theta, const Vector& g, const Matrix& h, double eta);

/// θ − η (JᵀJ)^{-1} Jᵀ r; damped like newton_pinv_step when JᵀJ is ill-conditioned.
SecondOrderStep gauss_newton_step(const ThetaVector& theta, const Vector& residuals, const Matrix& j, double eta);

struct LBFGSState {
    struct Pair {
        Vector s;
        Vector y;
    };
    std::deque<Pair> history;
    std::size_t memory = 10;

    /// Stores (s, y) unless the curvature condition sᵀy > 0 fails. Drops the
    /// oldest pair beyond `memory`. Returns whether the pair was kept.
    bool push(Vector s, Vector y);
};

/// Two-loop recursion, returns −H̃ g with H̃_0 = γ I, γ = sᵀy / yᵀy of the newest pair.
Vector lbfgs_direction(const LBFGSState& state, const Vector& g);

/// Central differences (L(θ + εe_i) − L(θ − εe_i)) / 2ε. Throws DivergenceError
/// naming the coordinate when a loss evaluation is not finite.
Vector grad_fd(const std::function<double(const Vector&)>& loss_fn, const Vector& theta, double eps = 1e-6);

/// Condition number of a symmetric positive semi-definite matrix (inf if singular).
double spd_condition(const Matrix& m);

} // namespace npde
