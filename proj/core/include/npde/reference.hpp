#pragma once

#include <utility>
#include <vector>

#include "npde/grid.hpp"

namespace npde {

struct GaussianProfile {
    double amplitude = 1.0;
    double center = 0.0;
    double sigma2 = 1.0;

    void validate() const;
    double operator()(double x) const;
};

/// Spread of a Gaussian under u_t = D u_xx after time T.
GaussianProfile heat_kernel_evolve(const GaussianProfile& p, double d, double t);

/// Same profile wrapped onto a periodic interval [left, left + width).
double periodic_gaussian(const GaussianProfile& p, double x, double left, double width);

/// 2·sqrt(rD); zero when either factor is zero.
double fisher_min_front_speed(double r, double d);

/// ħ/(2m).
double wick_coefficient(double hbar, double m);
/// Inverse map: the mass giving diffusion coefficient alpha2 = ħ/(2m).
double wick_mass(double hbar, double alpha2);

struct IdentitySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// lhs by direct differentiation of 1/(1+e^{-rx}), rhs = r·u(1−u).
IdentitySides sigmoid_derivative_identity(double r, double x);

/// Leftmost position (node spacing h, node 0 at x=0) where the field
/// crosses `level` going right, linearly interpolated. Returns -1 if the
/// field never reaches the level, and the domain length if it never drops below.
double front_position(const FieldState& u, double h, double level = 0.5);

/// Least-squares slope of positions vs times over the second half of the samples.
double front_speed(const std::vector<double>& times, const std::vector<double>& positions);

} // namespace npde
