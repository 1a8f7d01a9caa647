#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/linalg.hpp"
#include "oklab/moment.hpp"

namespace oklab {

/// Axis-aligned box in logarithmic coordinates.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }

    static Box of(std::vector<double> lo, std::vector<double> hi) {
        if (lo.size() != hi.size()) throw InputError("box: bound arity mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) throw InputError("box: lo must be strictly below hi");
        return Box{std::move(lo), std::move(hi)};
    }

    bool contains(std::span<const double> x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }

    bool strictly_inside(const Box& outer) const {
        if (lo.size() != outer.lo.size()) return false;
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(outer.lo[i] < lo[i] && hi[i] < outer.hi[i])) return false;
        return true;
    }
};

namespace capdetail {

/// Inequality g.p <= c in gradient coordinates (double precision).
struct HalfSpace {
    std::vector<double> g;
    double c;
};

/// Legendre transform of sum e^{x_i}: v(p) = sum (p_i ln p_i - p_i), with the
/// continuous extension v_i(0) = 0.
inline double conjugate_value(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) {
        if (v < 0) throw Error("internal: conjugate evaluated at negative point");
        if (v > 0) s += v * std::log(v) - v;
    }
    return s;
}

} // namespace capdetail

/// Result of solving sup_{p in K''} (p.x - v(p)): the capped value plus the
/// maximizer (which is the gradient) and an analytic Hessian on the active
/// piece.
struct CapEval {
    double value = 0.0;
    std::vector<double> gradient;
    SymMat hess;
    bool clamped = false; // true when some shrunk facet is active
};

/// The glued potential field of the capping construction:
///   phi'(x) = reg_max_delta(phi_cap(x) + C + delta, u_A(x)),
/// where phi_cap is the conjugate of the Euclidean potential restricted to the
/// margin-shrunk body K''. It equals sum e^{x_i} + C + delta on U, equals u_A
/// for large |z|, and is convex everywhere.
class PotentialField {
public:
    PotentialField(MomentModel model, Box cap_box, double margin, double delta)
        : model_(std::move(model)), box_(std::move(cap_box)), margin_(margin), rm_(delta) {
        if (!(margin > 0)) throw InputError("capped potential requires margin > 0");
        build_shrunk_body();
        check_gradient_box();
        choose_shift();
    }

    const MomentModel& model() const { return model_; }
    const Box& cap_box() const { return box_; }
    double margin() const { return margin_; }
    double delta() const { return rm_.delta; }
    double shift() const { return C_; }

    /// sup over K'' of p.x - v(p); exact componentwise e^x when unconstrained.
    CapEval cap(std::span<const double> x) const {
        const int n = model_.n;
        CapEval out;
        out.gradient.resize(static_cast<std::size_t>(n));
        std::vector<double> p(static_cast<std::size_t>(n));
        bool feasible = true;
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = std::exp(x[static_cast<std::size_t>(i)]);
        for (const auto& h : shrunk_)
            if (dotd(h.g, p) > h.c) feasible = false;
        if (feasible) {
            out.value = 0.0;
            out.hess = SymMat(n);
            for (int i = 0; i < n; ++i) {
                out.value += p[static_cast<std::size_t>(i)];
                out.gradient[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
                out.hess.at(i, i) = p[static_cast<std::size_t>(i)];
            }
            return out;
        }
        out.clamped = true;
        p = solve_constrained(x);
        out.value = dotd(std::vector<double>(x.begin(), x.end()), p) - capdetail::conjugate_value(p);
        out.gradient = p;
        out.hess = piece_hessian(p);
        return out;
    }

    double value(std::span<const double> x) const {
        return rm_(cap(x).value + C_ + rm_.delta, potential(model_, x));
    }

    std::vector<double> gradient(std::span<const double> x) const {
        const CapEval ce = cap(x);
        const double a = ce.value + C_ + rm_.delta;
        const double b = potential(model_, x);
        const auto [ra, rb] = rm_.partials(a, b);
        const auto gb = moment_map(model_, x);
        std::vector<double> g(ce.gradient.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = ra * ce.gradient[i] + rb * gb[i];
        return g;
    }

    SymMat hessian_at(std::span<const double> x) const {
        const CapEval ce = cap(x);
        const double a = ce.value + C_ + rm_.delta;
        const double b = potential(model_, x);
        const auto [ra, rb] = rm_.partials(a, b);
        const double curv = rm_.curvature(a, b);
        const auto gb = moment_map(model_, x);
        const SymMat Hb = ::oklab::hessian(model_, x);
        SymMat H = ra * ce.hess + rb * Hb;
        if (curv != 0.0) {
            for (int i = 0; i < H.n; ++i)
                for (int j = 0; j < H.n; ++j) {
                    const double di = ce.gradient[static_cast<std::size_t>(i)] - gb[static_cast<std::size_t>(i)];
                    const double dj = ce.gradient[static_cast<std::size_t>(j)] - gb[static_cast<std::size_t>(j)];
                    H.at(i, j) += curv * di * dj;
                }
        }
        return H;
    }

    /// g := phi' - u_A, the compactly supported correction.
    double correction(std::span<const double> x) const {
        return value(x) - potential(model_, x);
    }

    /// True iff the Euclidean branch wins by at least delta (so phi' equals
    /// sum e^{x_i} + C + delta exactly at x).
    bool euclidean_branch_wins(std::span<const double> x) const {
        const CapEval ce = cap(x);
        return ce.value + C_ + rm_.delta - potential(model_, x) >= rm_.delta;
    }

    /// True iff the u_A branch wins by at least delta (so the correction
    /// vanishes exactly at x).
    bool ambient_branch_wins(std::span<const double> x) const {
        const CapEval ce = cap(x);
        return potential(model_, x) - (ce.value + C_ + rm_.delta) >= rm_.delta;
    }

    const std::vector<capdetail::HalfSpace>& shrunk_body() const { return shrunk_; }

    /// Bodies not touching the coordinate hyperplane {p_i = 0} force the
    /// correction to vanish as x_i -> -inf as well; the audit needs to know.
    const std::vector<bool>& bottom_escape() const { return bottom_escape_; }

private:
    static double dotd(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    void build_shrunk_body() {
        const RatPolytope hull = model_.hull();
        if (!hull.full_dimensional())
            throw InputError("capped potential requires a full-dimensional exponent hull");
        const int n = model_.n;
        bottom_escape_.assign(static_cast<std::size_t>(n), true);
        for (const auto& v : hull.vertices())
            for (int i = 0; i < n; ++i)
                if (v[static_cast<std::size_t>(i)] == 0) bottom_escape_[static_cast<std::size_t>(i)] = false;
        for (const auto& f : hull.facets()) {
            capdetail::HalfSpace h;
            double norm2 = 0.0;
            for (const auto& v : f.normal) {
                h.g.push_back(to_double(v));
                norm2 += h.g.back() * h.g.back();
            }
            h.c = to_double(f.offset);
            if (!is_coordinate_facet(f)) h.c -= margin_ * std::sqrt(norm2);
            shrunk_.push_back(std::move(h));
        }
        // strictly feasible center for the barrier solver
        center_.assign(static_cast<std::size_t>(n), 0.0);
        for (const auto& v : hull.vertices())
            for (int i = 0; i < n; ++i)
                center_[static_cast<std::size_t>(i)] += to_double(v[static_cast<std::size_t>(i)]);
        for (auto& c : center_) c /= static_cast<double>(hull.vertices().size());
        for (const auto& h : shrunk_)
            if (dotd(h.g, center_) >= h.c)
                throw InputError("margin too large: shrunk body has lost its interior");
    }

    void check_gradient_box() {
        const int n = model_.n;
        if (box_.dim() != n) throw InputError("capped potential: box dimension mismatch");
        // max of g.p over the gradient box is attained at a corner
        for (const auto& h : shrunk_) {
            double worst = 0.0;
            std::vector<double> corner(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                const double plo = std::exp(box_.lo[static_cast<std::size_t>(i)]);
                const double phi = std::exp(box_.hi[static_cast<std::size_t>(i)]);
                const double gi = h.g[static_cast<std::size_t>(i)];
                corner[static_cast<std::size_t>(i)] = gi >= 0 ? phi : plo;
                worst += gi * corner[static_cast<std::size_t>(i)];
            }
            if (worst >= h.c)
                throw RegionError(corner,
                                  "cap region too large: its gradient image leaves the "
                                  "margin-shrunk body");
        }
    }

    void choose_shift() {
        // C makes the Euclidean branch win by 2*delta everywhere on U
        const int n = model_.n;
        const int res = 33;
        double worst = -std::numeric_limits<double>::infinity();
        std::vector<double> x(static_cast<std::size_t>(n));
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        for (;;) {
            double eucl = 0.0;
            for (int i = 0; i < n; ++i) {
                x[static_cast<std::size_t>(i)] =
                    box_.lo[static_cast<std::size_t>(i)] +
                    (box_.hi[static_cast<std::size_t>(i)] - box_.lo[static_cast<std::size_t>(i)]) *
                        idx[static_cast<std::size_t>(i)] / (res - 1);
                eucl += std::exp(x[static_cast<std::size_t>(i)]);
            }
            worst = std::max(worst, potential(model_, x) - eucl);
            int i = n - 1;
            for (; i >= 0; --i) {
                if (++idx[static_cast<std::size_t>(i)] < res) break;
                idx[static_cast<std::size_t>(i)] = 0;
            }
            if (i < 0) break;
        }
        C_ = worst + 2.0 * rm_.delta;
    }

    /// Barrier Newton solve of the constrained conjugate problem.
    std::vector<double> solve_constrained(std::span<const double> x) const {
        const int n = model_.n;
        std::vector<double> p = center_;
        for (double mu = 1.0; mu > 1e-13; mu *= 0.1) {
            for (int it = 0; it < 60; ++it) {
                std::vector<double> grad(static_cast<std::size_t>(n));
                std::vector<double> hess(static_cast<std::size_t>(n) * n, 0.0);
                for (int i = 0; i < n; ++i) {
                    grad[static_cast<std::size_t>(i)] =
                        std::log(p[static_cast<std::size_t>(i)]) - x[static_cast<std::size_t>(i)];
                    hess[static_cast<std::size_t>(i) * n + i] = 1.0 / p[static_cast<std::size_t>(i)];
                }
                for (const auto& h : shrunk_) {
                    const double s = h.c - dotd(h.g, p);
                    for (int i = 0; i < n; ++i) {
                        grad[static_cast<std::size_t>(i)] += mu * h.g[static_cast<std::size_t>(i)] / s;
                        for (int j = 0; j < n; ++j)
                            hess[static_cast<std::size_t>(i) * n + j] +=
                                mu * h.g[static_cast<std::size_t>(i)] * h.g[static_cast<std::size_t>(j)] / (s * s);
                    }
                }
                double gn = 0.0;
                for (double gval : grad) gn = std::max(gn, std::abs(gval));
                if (gn < 1e-12) break;
                std::vector<double> step;
                if (!solve_dense(hess, grad, n, step)) break;
                // backtrack into the strictly feasible region
                double t = 1.0;
                for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
                    std::vector<double> q(static_cast<std::size_t>(n));
                    bool ok = true;
                    for (int i = 0; i < n; ++i) {
                        q[static_cast<std::size_t>(i)] =
                            p[static_cast<std::size_t>(i)] - t * step[static_cast<std::size_t>(i)];
                        if (q[static_cast<std::size_t>(i)] <= 0) ok = false;
                    }
                    if (ok)
                        for (const auto& h : shrunk_)
                            if (dotd(h.g, q) >= h.c) ok = false;
                    if (ok) {
                        p = std::move(q);
                        break;
                    }
                }
            }
        }
        return p;
    }

    /// Sensitivity Hessian on the active piece:
    /// H = W - W G^T (G W G^T)^{-1} G W with W = diag(p).
    SymMat piece_hessian(const std::vector<double>& p) const {
        const int n = model_.n;
        std::vector<const capdetail::HalfSpace*> active;
        for (const auto& h : shrunk_) {
            const double s = h.c - dotd(h.g, p);
            double scale = std::abs(h.c) + 1.0;
            if (s <= 1e-6 * scale) active.push_back(&h);
        }
        SymMat H(n);
        for (int i = 0; i < n; ++i) H.at(i, i) = p[static_cast<std::size_t>(i)];
        if (active.empty()) return H;
        // drop linearly dependent active normals (double-precision pivoting)
        std::vector<std::vector<double>> rows;
        for (const auto* h : active) {
            std::vector<double> r = h->g;
            for (const auto& prev : rows) {
                double num = 0.0, den = 0.0;
                for (int i = 0; i < n; ++i) {
                    num += r[static_cast<std::size_t>(i)] * prev[static_cast<std::size_t>(i)];
                    den += prev[static_cast<std::size_t>(i)] * prev[static_cast<std::size_t>(i)];
                }
                for (int i = 0; i < n; ++i)
                    r[static_cast<std::size_t>(i)] -= num / den * prev[static_cast<std::size_t>(i)];
            }
            double norm = 0.0;
            for (double v : r) norm += v * v;
            if (norm > 1e-18) rows.push_back(h->g);
            if (static_cast<int>(rows.size()) == n) break;
        }
        const int m = static_cast<int>(rows.size());
        // gram = G W G^T
        std::vector<double> gram(static_cast<std::size_t>(m) * m, 0.0);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    s += rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
                         p[static_cast<std::size_t>(i)] *
                         rows[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
                gram[static_cast<std::size_t>(a) * m + b] = s;
            }
        // columns of W G^T
        std::vector<std::vector<double>> wgt(static_cast<std::size_t>(m),
                                             std::vector<double>(static_cast<std::size_t>(n)));
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i)
                wgt[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] =
                    p[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        // solve gram * Y = (W G^T)^T row by row and subtract W G^T Y
        for (int i = 0; i < n; ++i) {
            std::vector<double> rhs(static_cast<std::size_t>(m));
            for (int a = 0; a < m; ++a) rhs[static_cast<std::size_t>(a)] = wgt[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
            std::vector<double> y;
            if (!solve_dense(gram, rhs, m, y)) continue;
            for (int j = 0; j < n; ++j) {
                double corr = 0.0;
                for (int a = 0; a < m; ++a)
                    corr += wgt[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(a)];
                H.at(i, j) -= corr;
            }
        }
        // symmetrize against roundoff
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) {
                const double v = 0.5 * (H.at(i, j) + H.at(j, i));
                H.at(i, j) = v;
                H.at(j, i) = v;
            }
        return H;
    }

    MomentModel model_;
    Box box_;
    double margin_;
    RegMax rm_;
    double C_ = 0.0;
    std::vector<capdetail::HalfSpace> shrunk_;
    std::vector<double> center_;
    std::vector<bool> bottom_escape_;
};

/// Builds the capped field; `delta` is the regularized-max smoothing width.
inline PotentialField capped_potential(const MomentModel& model, const Box& cap_region,
                                       double margin, double delta = 0.1) {
    return PotentialField(model, cap_region, margin, delta);
}

/// Grid audit of the three field properties: (i) equals the shifted Euclidean
/// potential on the cap region, (ii) the correction vanishes towards the
/// escape faces of the window, (iii) convex at every grid point.
struct CapAudit {
    bool euclidean_on_region = true;
    bool correction_compactly_supported = true;
    bool convex = true;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    double max_correction = 0.0;
    std::vector<double> first_failure;

    bool pass() const {
        return euclidean_on_region && correction_compactly_supported && convex;
    }
};

inline CapAudit audit_field(const PotentialField& field, int grid = 11, double pad = 6.0,
                            double psd_tol = 1e-9) {
    CapAudit audit;
    const int n = field.model().n;
    const Box& U = field.cap_box();
    Box window = U;
    for (int i = 0; i < n; ++i) {
        window.lo[static_cast<std::size_t>(i)] -= pad;
        window.hi[static_cast<std::size_t>(i)] += pad;
    }
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (;;) {
        bool on_top_face = false;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] =
                window.lo[static_cast<std::size_t>(i)] +
                (window.hi[static_cast<std::size_t>(i)] - window.lo[static_cast<std::size_t>(i)]) *
                    idx[static_cast<std::size_t>(i)] / (grid - 1);
            if (idx[static_cast<std::size_t>(i)] == grid - 1) on_top_face = true;
            if (idx[static_cast<std::size_t>(i)] == 0 &&
                field.bottom_escape()[static_cast<std::size_t>(i)])
                on_top_face = true;
        }
        const double corr = field.correction(x);
        audit.max_correction = std::max(audit.max_correction, std::abs(corr));
        if (U.contains(x) && !field.euclidean_branch_wins(x)) {
            audit.euclidean_on_region = false;
            if (audit.first_failure.empty()) audit.first_failure = x;
        }
        if (on_top_face && !field.ambient_branch_wins(x)) {
            audit.correction_compactly_supported = false;
            if (audit.first_failure.empty()) audit.first_failure = x;
        }
        const double ev = min_eigenvalue(field.hessian_at(x));
        audit.min_eigenvalue = std::min(audit.min_eigenvalue, ev);
        if (ev < -psd_tol) {
            audit.convex = false;
            if (audit.first_failure.empty()) audit.first_failure = x;
        }
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < grid) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    return audit;
}

} // namespace oklab
