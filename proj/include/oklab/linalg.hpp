#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "oklab/rational.hpp"

namespace oklab {

/// Exact determinant of a small square rational matrix (fraction-free is not
/// needed at this scale; plain Gaussian elimination with rational pivots).
inline Rat rat_det(std::vector<RatVec> m) {
    const std::size_t n = m.size();
    Rat det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            const Rat f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

/// Row rank over Q; destroys its copy of the matrix.
inline std::size_t rat_rank(std::vector<RatVec> m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][col] == 0) continue;
            const Rat f = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

/// Solves the square rational system a.x = b; returns false if singular.
inline bool rat_solve(std::vector<RatVec> a, RatVec b, RatVec& x) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rat f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return true;
}

/// Dense symmetric matrix in double precision, row-major.
struct SymMat {
    int n = 0;
    std::vector<double> a; // n*n

    SymMat() = default;
    explicit SymMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline SymMat operator-(SymMat x, const SymMat& y) {
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
    return x;
}

inline SymMat operator*(double s, SymMat x) {
    for (auto& v : x.a) v *= s;
    return x;
}

inline SymMat operator+(SymMat x, const SymMat& y) {
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
    return x;
}

inline double det(const SymMat& m) {
    // LU with partial pivoting; n <= 4 in practice
    const int n = m.n;
    std::vector<double> a = m.a;
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (a[static_cast<std::size_t>(piv) * n + col] == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
            d = -d;
        }
        const double p = a[static_cast<std::size_t>(col) * n + col];
        d *= p;
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r) * n + col] / p;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
        }
    }
    return d;
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi sweeps.
inline std::vector<double> sym_eigenvalues(SymMat m) {
    const int n = m.n;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = m.at(k, p), akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = m.at(p, k), aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = m.at(i, i);
    return ev;
}

inline double min_eigenvalue(const SymMat& m) {
    auto ev = sym_eigenvalues(m);
    double mn = ev.empty() ? 0.0 : ev[0];
    for (double v : ev) mn = std::min(mn, v);
    return mn;
}

/// Solves the small SPD/general square double system in place; returns false if
/// the pivot collapses.
inline bool solve_dense(std::vector<double> a, std::vector<double> b, int n,
                        std::vector<double>& x) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (std::abs(a[static_cast<std::size_t>(piv) * n + col]) < 1e-300) return false;
        if (piv != col)
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
        if (piv != col) std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
        const double p = a[static_cast<std::size_t>(col) * n + col];
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[static_cast<std::size_t>(r) * n + col] / p;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    x.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] =
            b[static_cast<std::size_t>(i)] / a[static_cast<std::size_t>(i) * n + i];
    return true;
}

} // namespace oklab
