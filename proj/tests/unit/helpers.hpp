#pragma once

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "npde/grid.hpp"
#include "npde/linalg.hpp"

namespace npde::test {

inline std::vector<double> values_of(const FieldState& f) { return {f.values().begin(), f.values().end()}; }

inline void expect_near_all(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

inline void expect_near_all(const Vector& got, const std::vector<double>& want, double tol) {
    expect_near_all(std::vector<double>(got.data(), got.data() + got.size()), want, tol);
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

inline FieldState field1d(std::vector<double> v) {
    const std::size_t n = v.size();
    return FieldState(1, n, std::move(v));
}

} // namespace npde::test
