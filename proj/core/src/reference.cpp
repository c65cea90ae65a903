#include "npde/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace npde {

void GaussianProfile::validate() const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("sigma2 must be positive");
    if (!std::isfinite(amplitude) || !std::isfinite(center)) {
        throw std::invalid_argument("Gaussian profile must be finite");
    }
}

double GaussianProfile::operator()(double x) const {
    const double dx = x - center;
    return amplitude * std::exp(-dx * dx / (2.0 * sigma2));
}

GaussianProfile heat_kernel_evolve(const GaussianProfile& p, double d, double t) {
    p.validate();
    if (!(d >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("heat_kernel_evolve needs D >= 0 and T >= 0");
    GaussianProfile out = p;
    out.sigma2 = p.sigma2 + 2.0 * d * t;
    out.amplitude = p.amplitude * std::sqrt(p.sigma2 / out.sigma2);
    return out;
}

double periodic_gaussian(const GaussianProfile& p, double x, double left, double width) {
    // images out to where the tail is below double precision
    const double reach = 40.0 * std::sqrt(p.sigma2);
    const int images = static_cast<int>(std::ceil(reach / width));
    double sum = 0.0;
    const double base = left + std::fmod(std::fmod(x - left, width) + width, width);
    for (int i = -images; i <= images; ++i) sum += p(base + i * width);
    return sum;
}

double fisher_min_front_speed(double r, double d) {
    if (!(r >= 0.0) || !(d >= 0.0)) throw std::invalid_argument("fisher speed needs r >= 0 and D >= 0");
    return 2.0 * std::sqrt(r * d);
}

double wick_coefficient(double hbar, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("mass must be positive");
    return hbar / (2.0 * m);
}

double wick_mass(double hbar, double alpha2) {
    if (!(alpha2 > 0.0)) throw std::invalid_argument("alpha^2 must be positive");
    return hbar / (2.0 * alpha2);
}

IdentitySides sigmoid_derivative_identity(double r, double x) {
    const double z = r * x;
    // e^{-z} / (1+e^{-z})^2, written to stay finite in both tails
    const double e = std::exp(-std::abs(z));
    const double lhs = r * e / ((1.0 + e) * (1.0 + e));
    const double u = z >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
    return {lhs, r * u * (1.0 - u)};
}

double front_position(const FieldState& u, double h, double level) {
    if (u.dims() != 1) throw std::invalid_argument("front_position needs a 1D field");
    const auto& v = u.values();
    const auto n = static_cast<std::size_t>(v.size());
    if (n == 0 || v[0] < level) return -1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (v[j] >= level && v[j + 1] < level) {
            const double frac = (v[j] - level) / (v[j] - v[j + 1]);
            return h * (static_cast<double>(j) + frac);
        }
    }
    return h * static_cast<double>(n - 1);
}

double front_speed(const std::vector<double>& times, const std::vector<double>& positions) {
    if (times.size() != positions.size() || times.size() < 4) {
        throw std::invalid_argument("front_speed needs at least 4 matched samples");
    }
    const std::size_t start = times.size() / 2;
    const auto m = static_cast<double>(times.size() - start);
    double st = 0.0, sx = 0.0;
    for (std::size_t i = start; i < times.size(); ++i) {
        st += times[i];
        sx += positions[i];
    }
    const double tbar = st / m, xbar = sx / m;
    double num = 0.0, den = 0.0;
    for (std::size_t i = start; i < times.size(); ++i) {
        num += (times[i] - tbar) * (positions[i] - xbar);
        den += (times[i] - tbar) * (times[i] - tbar);
    }
    if (!(den > 0.0)) throw std::invalid_argument("front_speed needs distinct times");
    return num / den;
}

} // namespace npde
