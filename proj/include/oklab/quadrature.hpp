#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/moment.hpp"
#include "oklab/parallel.hpp"

namespace oklab {

/// Axis range for integration; either endpoint may be infinite.
struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_infinite = false;
    bool hi_infinite = false;

    static AxisRange all() { return {0.0, 0.0, true, true}; }
    static AxisRange finite(double a, double b) { return {a, b, false, false}; }
    static AxisRange below(double b) { return {0.0, b, true, false}; }
    static AxisRange above(double a) { return {a, 0.0, false, true}; }
};

struct QuadOptions {
    double rel_tol = 1e-2;
    double abs_tol = 1e-8;
    int max_depth = 28;
    long max_panels = 200000; // per 1-D integral; exhausted panels keep their estimate
    double stretch = 4.0;     // scale of the atanh substitution on infinite sides
};

namespace quaddetail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double gk_nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double k_weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double g_weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

template <typename F>
std::pair<double, double> gk15(const F& f, double a, double b) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double kres = 0.0, gres = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * gk_nodes[i]);
        kres += k_weights[i] * v;
        if (i % 2 == 1) gres += g_weights[i / 2] * v;
    }
    return {kres * h, std::abs(kres - gres) * h};
}

template <typename F>
double adapt(const F& f, double a, double b, double tol, int depth, const QuadOptions& opt,
             long& panels) {
    const auto [val, err] = gk15(f, a, b);
    ++panels;
    if (depth >= opt.max_depth || panels >= opt.max_panels) return val;
    if (err <= tol || err <= opt.abs_tol * 0.01) return val;
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, tol * 0.5, depth + 1, opt, panels) +
           adapt(f, mid, b, tol * 0.5, depth + 1, opt, panels);
}

} // namespace quaddetail

/// Adaptive Gauss-Kronrod on a finite interval.
template <typename F>
double integrate_finite(const F& f, double a, double b, const QuadOptions& opt = {}) {
    const auto [coarse, err0] = quaddetail::gk15(f, a, b);
    (void)err0;
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse));
    long panels = 0;
    return quaddetail::adapt(f, a, b, tol, 0, opt, panels);
}

/// Maps the axis range onto a finite interval; infinite sides use
/// x = c + s*atanh(t), which is the tanh compactification.
template <typename F>
double integrate_axis(const F& f, const AxisRange& r, const QuadOptions& opt = {}) {
    const double s = opt.stretch;
    if (!r.lo_infinite && !r.hi_infinite) {
        if (!(r.lo <= r.hi)) return 0.0;
        return integrate_finite(f, r.lo, r.hi, opt);
    }
    if (r.lo_infinite && r.hi_infinite) {
        auto g = [&](double t) {
            const double x = s * std::atanh(t);
            return f(x) * s / (1.0 - t * t);
        };
        return integrate_finite(g, -1.0, 1.0, opt);
    }
    if (r.lo_infinite) {
        auto g = [&](double t) { // x in (-inf, hi], t in [0, 1)
            const double x = r.hi - s * std::atanh(t);
            return f(x) * s / (1.0 - t * t);
        };
        return integrate_finite(g, 0.0, 1.0, opt);
    }
    auto g = [&](double t) { // x in [lo, inf)
        const double x = r.lo + s * std::atanh(t);
        return f(x) * s / (1.0 - t * t);
    };
    return integrate_finite(g, 0.0, 1.0, opt);
}

namespace quaddetail {

template <typename F>
double nest(const F& f, const std::vector<AxisRange>& region, std::vector<double>& x,
            std::size_t axis, const QuadOptions& opt) {
    QuadOptions inner = opt;
    inner.rel_tol = opt.rel_tol * 0.5;
    if (axis + 1 == region.size()) {
        return integrate_axis([&](double t) {
            x[axis] = t;
            return f(x);
        }, region[axis], opt);
    }
    return integrate_axis([&](double t) {
        x[axis] = t;
        return nest(f, region, x, axis + 1, inner);
    }, region[axis], opt);
}

} // namespace quaddetail

/// Nested adaptive quadrature of f over a product region. The outermost axis
/// is split into panels that run on the worker pool; panel sums are reduced
/// in index order, so the result is independent of the thread count.
template <typename F>
double integrate_region(const F& f, const std::vector<AxisRange>& region,
                        const QuadOptions& opt = {}) {
    if (region.empty()) throw InputError("integrate_region: empty region");
    if (region.size() == 1) {
        std::vector<double> x(1);
        return quaddetail::nest(f, region, x, 0, opt);
    }
    const int panels = 8;
    std::vector<double> partial(panels, 0.0);
    parallel_for(0, panels, [&](int p) {
        // subdivide the outer axis in the compactified coordinate
        const AxisRange outer = region.front();
        const double s = opt.stretch;
        double t0, t1;
        auto sub = [&](double a, double b) {
            return a + (b - a) * static_cast<double>(p) / panels;
        };
        auto sub1 = [&](double a, double b) {
            return a + (b - a) * static_cast<double>(p + 1) / panels;
        };
        std::vector<double> x(region.size());
        auto inner_val = [&](double xo) {
            x[0] = xo;
            QuadOptions inner = opt;
            inner.rel_tol = opt.rel_tol * 0.5;
            return quaddetail::nest(f, region, x, 1, inner);
        };
        double acc = 0.0;
        if (!outer.lo_infinite && !outer.hi_infinite) {
            t0 = sub(outer.lo, outer.hi);
            t1 = sub1(outer.lo, outer.hi);
            acc = integrate_finite(inner_val, t0, t1, opt);
        } else if (outer.lo_infinite && outer.hi_infinite) {
            t0 = sub(-1.0, 1.0);
            t1 = sub1(-1.0, 1.0);
            acc = integrate_finite([&](double t) {
                return inner_val(s * std::atanh(t)) * s / (1.0 - t * t);
            }, t0, t1, opt);
        } else if (outer.lo_infinite) {
            t0 = sub(0.0, 1.0);
            t1 = sub1(0.0, 1.0);
            acc = integrate_finite([&](double t) {
                return inner_val(outer.hi - s * std::atanh(t)) * s / (1.0 - t * t);
            }, t0, t1, opt);
        } else {
            t0 = sub(0.0, 1.0);
            t1 = sub1(0.0, 1.0);
            acc = integrate_finite([&](double t) {
                return inner_val(outer.lo + s * std::atanh(t)) * s / (1.0 - t * t);
            }, t0, t1, opt);
        }
        partial[static_cast<std::size_t>(p)] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v; // fixed order
    return total;
}

/// Integral of det Hess(u_A) over the region. By the change-of-variables
/// identity for the gradient map this equals the Lebesgue volume of the
/// moment image of the region; over all of R^n it converges to vol(Conv(A)).
inline double symplectic_volume(const MomentModel& A, const std::vector<AxisRange>& region,
                                const QuadOptions& opt = {}) {
    if (static_cast<int>(region.size()) != A.n)
        throw InputError("symplectic_volume: region dimension mismatch");
    const RatPolytope hull = A.hull();
    if (!hull.full_dimensional())
        throw NumericError("symplectic_volume requires a full-dimensional exponent hull");
    return integrate_region([&](const std::vector<double>& x) {
        return det(hessian(A, x));
    }, region, opt);
}

inline double symplectic_volume_all(const MomentModel& A, const QuadOptions& opt = {}) {
    return symplectic_volume(A, std::vector<AxisRange>(static_cast<std::size_t>(A.n), AxisRange::all()), opt);
}

/// omega_st-volume of the ellipsoid E(a_1,...,a_n) = {sum |z_i|^2/a_i < 1},
/// computed in logarithmic coordinates: n! times the integral of
/// det Hess(sum e^{x_i}) = prod e^{x_i} over the region where the Euclidean
/// gradient lands in the open simplex. The per-axis upper limits are explicit,
/// so the integrand stays smooth. Exact value: prod a_i.
inline double ellipsoid_symplectic_volume(const std::vector<double>& a, const QuadOptions& opt = {}) {
    const int n = static_cast<int>(a.size());
    for (double v : a)
        if (!(v > 0)) throw InputError("ellipsoid axes must be positive");

    std::function<double(std::vector<double>&, int, double)> level =
        [&](std::vector<double>& x, int axis, double budget) -> double {
        // budget = 1 - sum_{i<axis} e^{x_i}/a_i, strictly positive here
        const double cap = std::log(a[static_cast<std::size_t>(axis)] * budget);
        if (axis + 1 == n) {
            return integrate_axis([&](double t) { return std::exp(t); },
                                  AxisRange::below(cap), opt);
        }
        QuadOptions inner = opt;
        inner.rel_tol = opt.rel_tol * 0.5;
        return integrate_axis([&](double t) {
            x[static_cast<std::size_t>(axis)] = t;
            const double next = budget - std::exp(t) / a[static_cast<std::size_t>(axis)];
            if (!(next > 0)) return 0.0;
            return std::exp(t) * level(x, axis + 1, next);
        }, AxisRange::below(cap), inner);
    };

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return fact * level(x, 0, 1.0);
}

} // namespace oklab
