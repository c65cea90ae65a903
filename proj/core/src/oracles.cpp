#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace npde::oracle {

long neighbour(long pos, long n, BoundaryKind kind) {
    if (pos >= 0 && pos < n) return pos;
    switch (kind) {
    case BoundaryKind::periodic: return ((pos % n) + n) % n;
    case BoundaryKind::extend: return pos < 0 ? 0 : n - 1;
    case BoundaryKind::mirror: {
        if (n == 1) return 0;
        long p = pos;
        while (p < 0 || p >= n) p = p < 0 ? -p : 2 * (n - 1) - p;
        return p;
    }
    case BoundaryKind::dirichlet: return -1;
    }
    return -1;
}

Vec explicit_step(const Vec& u, const Vec& a, const BoundaryCondition& bc, double r, double k, Rxn rxn,
                  double rate) {
    const long n = static_cast<long>(u.size());
    // coefficients never see the dirichlet value; they are clamped instead
    const BoundaryKind akind = bc.kind == BoundaryKind::dirichlet ? BoundaryKind::extend : bc.kind;
    Vec out(u.size());
    for (long j = 0; j < n; ++j) {
        double lap = -2.0 * a[j] * u[j];
        for (long d : {-1L, 1L}) {
            const long src = neighbour(j + d, n, bc.kind);
            const double uv = src < 0 ? bc.value : u[src];
            lap += a[neighbour(j + d, n, akind)] * uv;
        }
        double c = 0.0;
        if (rxn == Rxn::fisher) c = rate * u[j] * (1.0 - u[j]);
        if (rxn == Rxn::linear) c = rate * u[j];
        out[j] = u[j] + r * lap + k * c;
    }
    return out;
}

Vec dense(const Mat& w, const Vec& b, const Vec& u) {
    Vec out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) s += w[i][j] * u[j];
        out[i] = s + b[i];
    }
    return out;
}

Vec rnn_step(const Vec& u, const Vec& u_prev, const Vec& f, double dxy, double dz, double v, double h, double k,
             const BoundaryCondition& bc) {
    const long n = static_cast<long>(u.size());
    const double h2 = h * h;
    Vec out(u.size());
    for (long j = 0; j < n; ++j) {
        double lap = -2.0 * u[j];
        for (long d : {-1L, 1L}) {
            const long src = neighbour(j + d, n, bc.kind);
            if (src >= 0) lap += u[src];
        }
        lap /= h2;
        // -v(x - u)/k = Dxy·lap + Dz(x - 2u + u⁻)/h² + f, linear in x
        const double lhs_coef = -v / k - dz / h2;
        const double rhs = dxy * lap + dz * (-2.0 * u[j] + u_prev[j]) / h2 + f[j] - v * u[j] / k;
        out[j] = rhs / lhs_coef;
    }
    return out;
}

Vec solve(Mat a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (a[piv][col] == 0.0) throw std::runtime_error("oracle::solve: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

Vec least_squares(const Mat& j, const Vec& t) {
    const std::size_t m = j.size(), n = j.front().size();
    Mat ata(n, Vec(n, 0.0));
    Vec atb(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t a = 0; a < n; ++a) {
            atb[a] += j[r][a] * t[r];
            for (std::size_t b = 0; b < n; ++b) ata[a][b] += j[r][a] * j[r][b];
        }
    }
    return solve(ata, atb);
}

Vec bfgs_direction(const std::vector<std::pair<Vec, Vec>>& pairs, const Vec& g) {
    const std::size_t n = g.size();
    auto dot = [](const Vec& x, const Vec& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };
    const auto& [s_last, y_last] = pairs.back();
    const double gamma = dot(s_last, y_last) / dot(y_last, y_last);
    Mat h(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) h[i][i] = gamma;
    // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
    for (const auto& [s, y] : pairs) {
        const double rho = 1.0 / dot(s, y);
        Mat left(n, Vec(n)), right(n, Vec(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < n; ++c) {
                left[i][c] = (i == c ? 1.0 : 0.0) - rho * s[i] * y[c];
                right[i][c] = (i == c ? 1.0 : 0.0) - rho * y[i] * s[c];
            }
        }
        Mat tmp(n, Vec(n, 0.0)), next(n, Vec(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t q = 0; q < n; ++q) tmp[i][c] += left[i][q] * h[q][c];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c) {
                for (std::size_t q = 0; q < n; ++q) next[i][c] += tmp[i][q] * right[q][c];
                next[i][c] += rho * s[i] * s[c];
            }
        h = std::move(next);
    }
    Vec d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < n; ++c) d[i] -= h[i][c] * g[c];
    return d;
}

std::pair<Vec, Vec> elman(const Vec& x, const Vec& h_prev, const Mat& u, const Mat& w, const Mat& v, const Vec& bh,
                          const Vec& bo, bool sigmoid) {
    auto act = [sigmoid](double z) { return sigmoid ? 1.0 / (1.0 + std::exp(-z)) : z; };
    Vec h(bh.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        double s = bh[i];
        for (std::size_t j = 0; j < x.size(); ++j) s += u[i][j] * x[j];
        for (std::size_t j = 0; j < h_prev.size(); ++j) s += w[i][j] * h_prev[j];
        h[i] = act(s);
    }
    Vec o(bo.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
        double s = bo[i];
        for (std::size_t j = 0; j < h.size(); ++j) s += v[i][j] * h[j];
        o[i] = act(s);
    }
    return {h, o};
}

} // namespace npde::oracle
