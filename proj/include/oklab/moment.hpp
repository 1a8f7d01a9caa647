#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/exponent.hpp"
#include "oklab/linalg.hpp"
#include "oklab/polytope.hpp"
#include "oklab/sections.hpp"

namespace oklab {

/// A finite exponent set A evaluated through the convex potential
/// u_A(x) = ln(sum_alpha e^(x.alpha)) in logarithmic coordinates
/// x_i = ln|z_i|^2. The gradient is the moment map onto Conv(A).
struct MomentModel {
    int n = 0;
    std::vector<Exponent> exps;

    static MomentModel from_exponents(std::vector<Exponent> exps) {
        if (exps.empty()) throw InputError("moment model needs a nonempty exponent set");
        MomentModel m;
        m.n = exps.front().dim();
        for (const auto& e : exps)
            if (e.dim() != m.n) throw InputError("moment model: mixed dimensions");
        m.exps = std::move(exps);
        return m;
    }

    static MomentModel from_leading_set(const LeadingSet& lead) {
        return from_exponents(lead.exponents);
    }

    RatPolytope hull() const {
        std::vector<RatVec> pts;
        for (const auto& e : exps) {
            RatVec p;
            for (int i = 0; i < n; ++i) p.push_back(Rat(e[i]));
            pts.push_back(std::move(p));
        }
        return convex_hull(std::move(pts));
    }
};

namespace momentdetail {
inline double dotxe(std::span<const double> x, const Exponent& e) {
    double s = 0.0;
    for (int i = 0; i < e.dim(); ++i) s += x[static_cast<std::size_t>(i)] * e[i];
    return s;
}
} // namespace momentdetail

/// u_A(x), max-subtracted log-sum-exp; stable for |x| up to 1e4 and beyond.
inline double potential(const MomentModel& A, std::span<const double> x) {
    if (static_cast<int>(x.size()) != A.n) throw InputError("potential: dimension mismatch");
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : A.exps) m = std::max(m, momentdetail::dotxe(x, e));
    double s = 0.0;
    for (const auto& e : A.exps) s += std::exp(momentdetail::dotxe(x, e) - m);
    return m + std::log(s);
}

/// Softmax weights of the exponent set at x; sums to one.
inline std::vector<double> moment_weights(const MomentModel& A, std::span<const double> x) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : A.exps) m = std::max(m, momentdetail::dotxe(x, e));
    std::vector<double> w(A.exps.size());
    double s = 0.0;
    for (std::size_t j = 0; j < A.exps.size(); ++j) {
        w[j] = std::exp(momentdetail::dotxe(x, A.exps[j]) - m);
        s += w[j];
    }
    for (auto& v : w) v /= s;
    return w;
}

/// The moment map: grad u_A(x), a point of Conv(A) (interior, for
/// full-dimensional hulls).
inline std::vector<double> moment_map(const MomentModel& A, std::span<const double> x) {
    if (static_cast<int>(x.size()) != A.n) throw InputError("moment_map: dimension mismatch");
    const auto w = moment_weights(A, x);
    std::vector<double> g(static_cast<std::size_t>(A.n), 0.0);
    for (std::size_t j = 0; j < A.exps.size(); ++j)
        for (int i = 0; i < A.n; ++i) g[static_cast<std::size_t>(i)] += w[j] * A.exps[j][i];
    return g;
}

/// Hess u_A(x): the covariance matrix of the softmax distribution on A.
/// Positive semidefinite; definite iff Conv(A) is full-dimensional.
inline SymMat hessian(const MomentModel& A, std::span<const double> x) {
    if (static_cast<int>(x.size()) != A.n) throw InputError("hessian: dimension mismatch");
    const auto w = moment_weights(A, x);
    std::vector<double> mean(static_cast<std::size_t>(A.n), 0.0);
    for (std::size_t j = 0; j < A.exps.size(); ++j)
        for (int i = 0; i < A.n; ++i) mean[static_cast<std::size_t>(i)] += w[j] * A.exps[j][i];
    SymMat H(A.n);
    for (std::size_t j = 0; j < A.exps.size(); ++j)
        for (int i = 0; i < A.n; ++i)
            for (int l = 0; l <= i; ++l) {
                const double di = A.exps[j][i] - mean[static_cast<std::size_t>(i)];
                const double dl = A.exps[j][l] - mean[static_cast<std::size_t>(l)];
                H.at(i, l) += w[j] * di * dl;
            }
    for (int i = 0; i < A.n; ++i)
        for (int l = 0; l < i; ++l) H.at(l, i) = H.at(i, l);
    return H;
}

/// Newton solve of grad u_A(x) = target for a target interior to Conv(A),
/// started from `start`: minimizes the strictly convex u_A(x) - target.x
/// with backtracking.
inline std::vector<double> moment_preimage_from(const MomentModel& A,
                                                std::span<const double> target,
                                                std::vector<double> start, int max_iters = 80) {
    const int n = A.n;
    std::vector<double> x = std::move(start);
    if (static_cast<int>(x.size()) != n) x.assign(static_cast<std::size_t>(n), 0.0);
    auto objective = [&](const std::vector<double>& p) {
        double o = potential(A, p);
        for (int i = 0; i < n; ++i) o -= target[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
        return o;
    };
    auto residual = [&](const std::vector<double>& p) {
        const auto g = moment_map(A, p);
        double gn = 0.0;
        for (int i = 0; i < n; ++i)
            gn = std::max(gn, std::abs(g[static_cast<std::size_t>(i)] - target[static_cast<std::size_t>(i)]));
        return gn;
    };
    for (int it = 0; it < max_iters; ++it) {
        auto g = moment_map(A, x);
        double gn = 0.0;
        for (int i = 0; i < n; ++i) {
            g[static_cast<std::size_t>(i)] -= target[static_cast<std::size_t>(i)];
            gn = std::max(gn, std::abs(g[static_cast<std::size_t>(i)]));
        }
        if (gn < 1e-13) break;
        const SymMat H = hessian(A, x);
        std::vector<double> step;
        if (!solve_dense(H.a, g, n, step)) {
            // a bad start can sit where the covariance has collapsed; restart
            // from the origin once before giving up
            bool zero_start = true;
            for (double v : x)
                if (v != 0.0) zero_start = false;
            if (zero_start) throw NumericError("moment preimage: singular Hessian");
            x.assign(static_cast<std::size_t>(n), 0.0);
            continue;
        }
        // the covariance flattens exponentially far out, so raw Newton steps
        // can be astronomically long there; clamp to a trust radius
        double smax = 0.0;
        for (double v : step) smax = std::max(smax, std::abs(v));
        if (smax > 20.0)
            for (auto& v : step) v *= 20.0 / smax;
        const double base = objective(x);
        bool moved = false;
        double t = 1.0;
        for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
            std::vector<double> y(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - t * step[static_cast<std::size_t>(i)];
            if (objective(y) < base) {
                x = std::move(y);
                moved = true;
                break;
            }
        }
        if (!moved) {
            // objective differences underflow near the optimum; the full
            // Newton step still contracts the residual quadratically
            std::vector<double> y(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - step[static_cast<std::size_t>(i)];
            if (residual(y) < gn)
                x = std::move(y);
            else
                break;
        }
    }
    return x;
}

inline std::vector<double> moment_preimage(const MomentModel& A, std::span<const double> target,
                                           int max_iters = 80) {
    return moment_preimage_from(A, target, {}, max_iters);
}

// ---------------------------------------------------------------------------
// Regularized maximum

/// Smooth convex max: reg_max(x,y) = (x + y + m(x-y))/2 where m is the even
/// convex C^2 spline equal to |t| for |t| >= delta. Exactly max(x,y) when the
/// arguments differ by at least delta, and always >= max(x,y).
struct RegMax {
    double delta;

    explicit RegMax(double d) : delta(d) {
        if (!(d > 0)) throw InputError("reg_max requires delta > 0");
    }

    // even quartic on [-delta, delta] matched to |t| up to second derivatives
    double m(double t) const {
        const double a = std::abs(t);
        if (a >= delta) return a;
        const double t2 = t * t;
        return 3.0 * delta / 8.0 + 3.0 * t2 / (4.0 * delta) - t2 * t2 / (8.0 * delta * delta * delta);
    }

    double m1(double t) const { // m'
        if (t >= delta) return 1.0;
        if (t <= -delta) return -1.0;
        return 3.0 * t / (2.0 * delta) - t * t * t / (2.0 * delta * delta * delta);
    }

    double m2(double t) const { // m''
        const double a = std::abs(t);
        if (a >= delta) return 0.0;
        return 1.5 / delta * (1.0 - t * t / (delta * delta));
    }

    double operator()(double x, double y) const { return 0.5 * (x + y + m(x - y)); }

    /// Partials (d/dx, d/dy); both in [0,1], summing to 1.
    std::pair<double, double> partials(double x, double y) const {
        const double d = m1(x - y);
        return {0.5 * (1.0 + d), 0.5 * (1.0 - d)};
    }

    /// Second derivative weight of the rank-one curvature term.
    double curvature(double x, double y) const { return 0.5 * m2(x - y); }
};

inline double reg_max(const RegMax& spec, double x, double y) { return spec(x, y); }

// ---------------------------------------------------------------------------
// Monte-Carlo polydisk oracle (fixes the n! normalization convention)

/// Estimates the omega_st^n volume of the polydisk {|z_i| < r_i} by direct
/// 2n-dimensional Monte-Carlo integration: since omega_st = dd^c |z|^2, the
/// top power has constant density n!/pi^n against Lebesgue measure on C^n.
/// The exact answer is n! * prod r_i^2 = n! * vol(mu-image).
inline double polydisk_mc_omega_volume(const std::vector<double>& radii, std::size_t samples,
                                       std::uint64_t seed) {
    const int n = static_cast<int>(radii.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        bool inside = true;
        for (int i = 0; i < n && inside; ++i) {
            const double re = unif(rng) * radii[static_cast<std::size_t>(i)];
            const double im = unif(rng) * radii[static_cast<std::size_t>(i)];
            if (re * re + im * im >= radii[static_cast<std::size_t>(i)] * radii[static_cast<std::size_t>(i)])
                inside = false;
        }
        if (inside) ++hits;
    }
    double box = 1.0;
    for (double r : radii) box *= (2.0 * r) * (2.0 * r);
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    const double pi = 3.14159265358979323846;
    const double density = fact / std::pow(pi, n);
    return density * box * static_cast<double>(hits) / static_cast<double>(samples);
}

} // namespace oklab
