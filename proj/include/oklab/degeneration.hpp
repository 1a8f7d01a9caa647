#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oklab/cap.hpp"
#include "oklab/errors.hpp"
#include "oklab/moment.hpp"
#include "oklab/order.hpp"
#include "oklab/parallel.hpp"
#include "oklab/sections.hpp"

namespace oklab {

/// One tail term of a rescaled distinguished section: coeff * tau^tau_pow * z^beta.
struct RescaledTerm {
    Exponent beta;
    Rat coeff;
    std::int64_t tau_pow; // (beta - alpha) . gamma, >= 1 by the separation property
};

/// r_alpha(z) = tau^{-alpha.gamma} s_alpha(tau^gamma z) = z^alpha + tail.
struct RescaledSection {
    Exponent alpha;
    std::vector<RescaledTerm> tail;
};

/// Symbolic rescaling of a distinguished basis by the weight gamma. Checks the
/// per-term separation audit: every tail exponent must carry tau power >= 1.
inline std::vector<RescaledSection> rescale_symbolic(const LeadingSet& basis,
                                                     std::span<const std::int64_t> gamma) {
    std::vector<RescaledSection> out;
    for (std::size_t i = 0; i < basis.exponents.size(); ++i) {
        RescaledSection r;
        r.alpha = basis.exponents[i];
        const std::int64_t adot = r.alpha.dot(gamma);
        for (const auto& [beta, coeff] : basis.distinguished[i].terms()) {
            if (beta == r.alpha) {
                if (coeff != 1)
                    throw InputError("distinguished section lacks unit leading coefficient");
                continue;
            }
            const std::int64_t pow = beta.dot(gamma) - adot;
            if (pow < 1)
                throw InputError("weight vector fails to separate exponent " + beta.str() +
                                 " above " + r.alpha.str());
            r.tail.push_back(RescaledTerm{beta, coeff, pow});
        }
        out.push_back(std::move(r));
    }
    return out;
}

/// A toric-degeneration run: distinguished basis, separating weight, scale.
struct DegenerationRun {
    LeadingSet basis;
    std::vector<std::int64_t> gamma;
    Rat tau;
    double ball_radius = 1.0;

    DegenerationRun(LeadingSet basis_, std::vector<std::int64_t> gamma_, Rat tau_,
                    double ball = 1.0)
        : basis(std::move(basis_)), gamma(std::move(gamma_)), tau(std::move(tau_)),
          ball_radius(ball) {
        if (!(tau > 0 && tau < 1)) throw InputError("degeneration requires tau in (0,1)");
        if (!(ball_radius > 0)) throw InputError("degeneration requires a positive ball radius");
        const std::int64_t C = separating_degree_bound(basis.exponents);
        if (!verify_separation(basis.order, basis.exponents, gamma,
                               static_cast<int>(3 * C)))
            throw InputError("weight vector fails verify_separation on the basis exponents");
        rescale_symbolic(basis, gamma); // per-term audit
    }
};

/// Materializes r_alpha with the run's rational tau, exactly.
inline std::vector<PolySection> rescale_basis(const DegenerationRun& run) {
    std::vector<PolySection> out;
    for (const auto& r : rescale_symbolic(run.basis, run.gamma)) {
        PolySection s = PolySection::monomial(r.alpha);
        for (const auto& t : r.tail) {
            Rat tp = 1;
            for (std::int64_t i = 0; i < t.tau_pow; ++i) tp *= run.tau;
            s.add_term(t.beta, t.coeff * tp);
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// Coefficient-sum bound for sup over the sup-norm ball of |r_alpha - z^alpha|:
/// max_alpha sum_tail |a_beta| tau^pow radius^{|beta|}.
inline double degeneration_error(const DegenerationRun& run) {
    const double tau = to_double(run.tau);
    const double r = run.ball_radius;
    double worst = 0.0;
    for (const auto& sec : rescale_symbolic(run.basis, run.gamma)) {
        double s = 0.0;
        for (const auto& t : sec.tail)
            s += std::abs(to_double(t.coeff)) *
                 std::pow(tau, static_cast<double>(t.tau_pow)) *
                 std::pow(r, t.beta.total_degree());
        worst = std::max(worst, s);
    }
    return worst;
}

/// The audited constant C with degeneration_error(tau) <= C * tau for tau <= 1
/// (every tail power is >= 1): C = max_alpha sum |a_beta| radius^{|beta|}.
inline double degeneration_error_constant(const LeadingSet& basis,
                                          std::span<const std::int64_t> gamma,
                                          double ball_radius = 1.0) {
    double worst = 0.0;
    for (const auto& sec : rescale_symbolic(basis, gamma)) {
        double s = 0.0;
        for (const auto& t : sec.tail)
            s += std::abs(to_double(t.coeff)) * std::pow(ball_radius, t.beta.total_degree());
        worst = std::max(worst, s);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Cutoff and the phase-averaged rescaled potential

/// Tensor-product quintic smoothstep cutoff: 0 on the inner box U, 1 outside
/// the outer box K, C^2 everywhere.
class Cutoff {
public:
    Cutoff(Box inner, Box outer) : u_(std::move(inner)), k_(std::move(outer)) {
        if (!u_.strictly_inside(k_))
            throw InputError("cutoff requires the inner box strictly inside the outer box");
    }

    double value(std::span<const double> x) const {
        double prod = 1.0;
        for (int i = 0; i < u_.dim(); ++i) prod *= 1.0 - sigma(i, x[static_cast<std::size_t>(i)]);
        return 1.0 - prod;
    }

    std::vector<double> gradient(std::span<const double> x) const {
        const int n = u_.dim();
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double prod = sigma1(i, x[static_cast<std::size_t>(i)]);
            for (int j = 0; j < n; ++j)
                if (j != i) prod *= 1.0 - sigma(j, x[static_cast<std::size_t>(j)]);
            g[static_cast<std::size_t>(i)] = prod;
        }
        return g;
    }

    SymMat hessian(std::span<const double> x) const {
        const int n = u_.dim();
        SymMat H(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double v;
                if (i == j) {
                    v = sigma2(i, x[static_cast<std::size_t>(i)]);
                    for (int l = 0; l < n; ++l)
                        if (l != i) v *= 1.0 - sigma(l, x[static_cast<std::size_t>(l)]);
                } else {
                    v = -sigma1(i, x[static_cast<std::size_t>(i)]) * sigma1(j, x[static_cast<std::size_t>(j)]);
                    for (int l = 0; l < n; ++l)
                        if (l != i && l != j) v *= 1.0 - sigma(l, x[static_cast<std::size_t>(l)]);
                }
                H.at(i, j) = v;
                H.at(j, i) = v;
            }
        return H;
    }

private:
    static double step(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
    static double step1(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
    static double step2(double t) { return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }

    // per-axis profile: 0 inside [ulo, uhi], 1 at and beyond [klo, khi]
    double sigma(int i, double x) const {
        const auto [t, scale, side] = axis_local(i, x);
        (void)scale;
        (void)side;
        if (t <= 0) return 0.0;
        if (t >= 1) return 1.0;
        return step(t);
    }

    double sigma1(int i, double x) const {
        const auto [t, scale, side] = axis_local(i, x);
        if (t <= 0 || t >= 1) return 0.0;
        return step1(t) * side / scale;
    }

    double sigma2(int i, double x) const {
        const auto [t, scale, side] = axis_local(i, x);
        (void)side;
        if (t <= 0 || t >= 1) return 0.0;
        return step2(t) / (scale * scale);
    }

    struct Local {
        double t;
        double scale;
        double side;
    };

    Local axis_local(int i, double x) const {
        const double ulo = u_.lo[static_cast<std::size_t>(i)], uhi = u_.hi[static_cast<std::size_t>(i)];
        const double klo = k_.lo[static_cast<std::size_t>(i)], khi = k_.hi[static_cast<std::size_t>(i)];
        if (x < ulo) return {(ulo - x) / (ulo - klo), ulo - klo, -1.0};
        if (x > uhi) return {(x - uhi) / (khi - uhi), khi - uhi, +1.0};
        return {0.0, 1.0, 0.0};
    }

    Box u_;
    Box k_;
};

/// Weighted log-sum-exp potential ln(sum w_t e^{x.beta_t}); used for the
/// phase-averaged rescaled potential (Parseval over the torus).
struct WeightedLse {
    int n = 0;
    std::vector<std::vector<double>> betas; // each length n (half-integer scaled)
    std::vector<double> logw;

    double value(std::span<const double> x) const {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < betas.size(); ++t) m = std::max(m, term(t, x));
        double s = 0.0;
        for (std::size_t t = 0; t < betas.size(); ++t) s += std::exp(term(t, x) - m);
        return m + std::log(s);
    }

    std::vector<double> gradient(std::span<const double> x) const {
        auto w = weights(x);
        std::vector<double> g(static_cast<std::size_t>(n), 0.0);
        for (std::size_t t = 0; t < betas.size(); ++t)
            for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] += w[t] * betas[t][static_cast<std::size_t>(i)];
        return g;
    }

    SymMat hessian(std::span<const double> x) const {
        auto w = weights(x);
        std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
        for (std::size_t t = 0; t < betas.size(); ++t)
            for (int i = 0; i < n; ++i) mean[static_cast<std::size_t>(i)] += w[t] * betas[t][static_cast<std::size_t>(i)];
        SymMat H(n);
        for (std::size_t t = 0; t < betas.size(); ++t)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j)
                    H.at(i, j) += w[t] * (betas[t][static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)]) *
                                  (betas[t][static_cast<std::size_t>(j)] - mean[static_cast<std::size_t>(j)]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) H.at(j, i) = H.at(i, j);
        return H;
    }

private:
    double term(std::size_t t, std::span<const double> x) const {
        double s = logw[t];
        for (int i = 0; i < n; ++i) s += betas[t][static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        return s;
    }

    std::vector<double> weights(std::span<const double> x) const {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < betas.size(); ++t) m = std::max(m, term(t, x));
        std::vector<double> w(betas.size());
        double s = 0.0;
        for (std::size_t t = 0; t < betas.size(); ++t) {
            w[t] = std::exp(term(t, x) - m);
            s += w[t];
        }
        for (auto& v : w) v /= s;
        return w;
    }
};

// ---------------------------------------------------------------------------
// Gluing certificate

/// Numerical evidence for the regularized-max gluing at scale tau: the two
/// band inequalities hold with positive margin on the inner box and on the
/// outer boundary collar (certified against torus-phase worst cases by
/// coefficient-sum envelopes), and the glued potential stays strictly convex
/// on the grid. Doubling the grid must not flip any sign.
struct GluingCertificate {
    bool success = false;
    std::string failure_reason;

    double requested_delta = 0.0;
    double delta = 0.0;
    int delta_halvings = 0;
    Rat tau;
    int tau_exponent = 0; // tau = 2^-tau_exponent
    Box inner{{0}, {1}};
    Box outer{{0}, {1}};
    int grid = 0;
    double ball_radius = 1.0;
    double rescaled_sup_norm = 0.0; // sup over K of |tau^gamma z|_2, must be <= ball

    std::vector<double> margins_inner; // per grid point: phi - (psi_up - delta)
    std::vector<double> margins_collar; // per collar point: (psi_low - 3 delta) - phi
    double min_margin_inner = 0.0;
    double min_margin_collar = 0.0;
    std::vector<double> argmin_inner;
    std::vector<double> argmin_collar;

    double psd_floor_phi = 0.0;   // min eig of Hess(u_A - 4 delta f) over the grid
    double psd_floor_glued = 0.0; // min eig of the glued field over the grid
    bool pointwise_equalities = false; // phi' == phi on U and == psi-2delta on the collar

    double doubled_min_margin_inner = 0.0;
    double doubled_min_margin_collar = 0.0;
    double doubled_psd_floor_phi = 0.0;
    bool grid_stable = false;
};

namespace gluedetail {

struct Envelopes {
    double up;
    double low; // -inf if the lower envelope collapses
};

/// Torus worst-case bounds for ln(sum_alpha |r_alpha(z)|^2) on the slice
/// |z_i|^2 = e^{x_i}, by the triangle inequality on each section.
inline Envelopes psi_envelopes(const std::vector<RescaledSection>& sections, double log_tau,
                               std::span<const double> x) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    double up_max = neg_inf, low_max = neg_inf;
    std::vector<double> ups, lows;
    ups.reserve(sections.size());
    lows.reserve(sections.size());
    for (const auto& sec : sections) {
        double lm = 0.0;
        for (int i = 0; i < sec.alpha.dim(); ++i) lm += 0.5 * sec.alpha[i] * x[static_cast<std::size_t>(i)];
        double lt = neg_inf;
        for (const auto& t : sec.tail) {
            double term = std::log(std::abs(to_double(t.coeff))) +
                          static_cast<double>(t.tau_pow) * log_tau;
            for (int i = 0; i < t.beta.dim(); ++i) term += 0.5 * t.beta[i] * x[static_cast<std::size_t>(i)];
            lt = lt > term ? lt + std::log1p(std::exp(term - lt))
                           : term + std::log1p(lt == neg_inf ? 0.0 : std::exp(lt - term));
        }
        double up, low;
        if (lt == neg_inf) {
            up = 2.0 * lm;
            low = 2.0 * lm;
        } else {
            up = 2.0 * (lm > lt ? lm + std::log1p(std::exp(lt - lm))
                                : lt + std::log1p(std::exp(lm - lt)));
            low = lt >= lm ? neg_inf : 2.0 * (lm + std::log1p(-std::exp(lt - lm)));
        }
        ups.push_back(up);
        lows.push_back(low);
        up_max = std::max(up_max, up);
        low_max = std::max(low_max, low);
    }
    double su = 0.0, sl = 0.0;
    for (double u : ups) su += std::exp(u - up_max);
    for (double l : lows)
        if (l != neg_inf) sl += std::exp(l - low_max);
    Envelopes e;
    e.up = up_max + std::log(su);
    e.low = (low_max == neg_inf) ? neg_inf : low_max + std::log(sl);
    return e;
}

inline WeightedLse phase_average(const std::vector<RescaledSection>& sections, double log_tau,
                                 int n) {
    WeightedLse lse;
    lse.n = n;
    for (const auto& sec : sections) {
        std::vector<double> b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = sec.alpha[i];
        lse.betas.push_back(std::move(b));
        lse.logw.push_back(0.0);
        for (const auto& t : sec.tail) {
            std::vector<double> bb(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) bb[static_cast<std::size_t>(i)] = t.beta[i];
            lse.betas.push_back(std::move(bb));
            lse.logw.push_back(2.0 * (std::log(std::abs(to_double(t.coeff))) +
                                      static_cast<double>(t.tau_pow) * log_tau));
        }
    }
    return lse;
}

inline std::vector<std::vector<double>> box_grid(const Box& b, int per_axis) {
    const int n = b.dim();
    std::vector<std::vector<double>> pts;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] =
                b.lo[static_cast<std::size_t>(i)] +
                (b.hi[static_cast<std::size_t>(i)] - b.lo[static_cast<std::size_t>(i)]) *
                    idx[static_cast<std::size_t>(i)] / (per_axis - 1);
        pts.push_back(std::move(x));
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    return pts;
}

/// Grid points on the boundary faces of the box (where the cutoff is exactly 1).
inline std::vector<std::vector<double>> boundary_grid(const Box& b, int per_axis) {
    const int n = b.dim();
    std::vector<std::vector<double>> pts;
    if (n == 1) {
        pts.push_back({b.lo[0]});
        pts.push_back({b.hi[0]});
        return pts;
    }
    for (int axis = 0; axis < n; ++axis) {
        // flatten one axis to each side and grid the others
        std::vector<double> lo_rest, hi_rest;
        for (int j = 0; j < n; ++j) {
            if (j == axis) continue;
            lo_rest.push_back(b.lo[static_cast<std::size_t>(j)]);
            hi_rest.push_back(b.hi[static_cast<std::size_t>(j)]);
        }
        Box facebox{lo_rest, hi_rest};
        for (const auto& partial : box_grid(facebox, per_axis)) {
            for (double side : {b.lo[static_cast<std::size_t>(axis)], b.hi[static_cast<std::size_t>(axis)]}) {
                std::vector<double> x;
                int jj = 0;
                for (int j = 0; j < n; ++j) {
                    if (j == axis) {
                        x.push_back(side);
                    } else {
                        x.push_back(partial[static_cast<std::size_t>(jj)]);
                        ++jj;
                    }
                }
                pts.push_back(std::move(x));
            }
        }
    }
    return pts;
}

struct BandScan {
    double min_inner = std::numeric_limits<double>::infinity();
    double min_collar = std::numeric_limits<double>::infinity();
    std::vector<double> margins_inner;
    std::vector<double> margins_collar;
    std::vector<double> argmin_inner;
    std::vector<double> argmin_collar;
};

inline BandScan scan_bands(const MomentModel& model, const std::vector<RescaledSection>& secs,
                           double log_tau, double delta,
                           const std::vector<std::vector<double>>& inner_pts,
                           const std::vector<std::vector<double>>& collar_pts) {
    BandScan scan;
    scan.margins_inner.resize(inner_pts.size());
    scan.margins_collar.resize(collar_pts.size());
    parallel_for(0, static_cast<int>(inner_pts.size()), [&](int i) {
        const auto& x = inner_pts[static_cast<std::size_t>(i)];
        const auto env = psi_envelopes(secs, log_tau, x);
        // f == 0 on U: margin of  phi > psi - delta
        scan.margins_inner[static_cast<std::size_t>(i)] = potential(model, x) - env.up + delta;
    });
    parallel_for(0, static_cast<int>(collar_pts.size()), [&](int i) {
        const auto& x = collar_pts[static_cast<std::size_t>(i)];
        const auto env = psi_envelopes(secs, log_tau, x);
        // f == 1 on the collar: margin of  phi < psi - 3 delta
        scan.margins_collar[static_cast<std::size_t>(i)] =
            (env.low == -std::numeric_limits<double>::infinity())
                ? -std::numeric_limits<double>::infinity()
                : env.low + delta - potential(model, x);
    });
    for (std::size_t i = 0; i < inner_pts.size(); ++i)
        if (scan.margins_inner[i] < scan.min_inner) {
            scan.min_inner = scan.margins_inner[i];
            scan.argmin_inner = inner_pts[i];
        }
    for (std::size_t i = 0; i < collar_pts.size(); ++i)
        if (scan.margins_collar[i] < scan.min_collar) {
            scan.min_collar = scan.margins_collar[i];
            scan.argmin_collar = collar_pts[i];
        }
    return scan;
}

/// Min eigenvalue of Hess(u_A - 4 delta f) over the points.
inline double psd_floor(const MomentModel& model, const Cutoff& cut, double delta,
                        const std::vector<std::vector<double>>& pts) {
    std::vector<double> mins(pts.size());
    parallel_for(0, static_cast<int>(pts.size()), [&](int i) {
        const auto& x = pts[static_cast<std::size_t>(i)];
        const SymMat H = hessian(model, x) - 4.0 * delta * cut.hessian(x);
        mins[static_cast<std::size_t>(i)] = min_eigenvalue(H);
    });
    double floor = std::numeric_limits<double>::infinity();
    for (double v : mins) floor = std::min(floor, v);
    return floor;
}

/// Min eigenvalue of the glued field reg_max(u_A - 4 delta f, psi_avg - 2 delta)
/// over the points, using the phase-averaged slice potential.
inline double psd_floor_glued(const MomentModel& model, const Cutoff& cut,
                              const WeightedLse& psi, double delta,
                              const std::vector<std::vector<double>>& pts) {
    RegMax rm(delta);
    std::vector<double> mins(pts.size());
    parallel_for(0, static_cast<int>(pts.size()), [&](int i) {
        const auto& x = pts[static_cast<std::size_t>(i)];
        const double a = potential(model, x) - 4.0 * delta * cut.value(x);
        const double b = psi.value(x) - 2.0 * delta;
        const auto [ra, rb] = rm.partials(a, b);
        const double curv = rm.curvature(a, b);
        auto ga = moment_map(model, x);
        {
            const auto gf = cut.gradient(x);
            for (std::size_t j = 0; j < ga.size(); ++j) ga[j] -= 4.0 * delta * gf[j];
        }
        const auto gb = psi.gradient(x);
        SymMat H = ra * (hessian(model, x) - 4.0 * delta * cut.hessian(x)) + rb * psi.hessian(x);
        if (curv != 0.0)
            for (int a2 = 0; a2 < H.n; ++a2)
                for (int b2 = 0; b2 < H.n; ++b2)
                    H.at(a2, b2) += curv * (ga[static_cast<std::size_t>(a2)] - gb[static_cast<std::size_t>(a2)]) *
                                    (ga[static_cast<std::size_t>(b2)] - gb[static_cast<std::size_t>(b2)]);
        mins[static_cast<std::size_t>(i)] = min_eigenvalue(H);
    });
    double floor = std::numeric_limits<double>::infinity();
    for (double v : mins) floor = std::min(floor, v);
    return floor;
}

} // namespace gluedetail

/// Searches tau down a fixed dyadic schedule until both band inequalities are
/// certified on the grids, then records convexity evidence and the doubled-grid
/// stability check. delta is auto-halved (up to 20 times) when the cutoff
/// destroys strict convexity at the requested width.
inline GluingCertificate gluing_certificate(const LeadingSet& basis,
                                            std::span<const std::int64_t> gamma, Box inner,
                                            Box outer, double delta, int grid,
                                            double ball_radius = 1.0,
                                            double psd_threshold = 1e-9,
                                            int first_tau_exponent = 1) {
    using namespace gluedetail;
    if (grid < 4) throw InputError("gluing certificate needs a grid of at least 4 per axis");
    if (!(delta > 0)) throw InputError("gluing certificate requires delta > 0");
    if (!inner.strictly_inside(outer))
        throw InputError("inner box must be strictly inside the outer box");

    const MomentModel model = MomentModel::from_exponents(basis.exponents);
    const RatPolytope hull = model.hull();
    if (!hull.full_dimensional())
        throw InputError("gluing certificate requires a full-dimensional exponent hull");
    const int n = model.n;
    if (inner.dim() != n) throw InputError("gluing certificate: box dimension mismatch");

    // moment image of the inner box must sit strictly inside the essential
    // interior of the body
    {
        double min_slack = std::numeric_limits<double>::infinity();
        std::vector<double> offender;
        for (const auto& x : box_grid(inner, 9)) {
            const auto mu = moment_map(model, x);
            for (const auto& f : hull.facets()) {
                if (is_coordinate_facet(f)) continue;
                double g2 = 0.0, gx = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double gi = to_double(f.normal[static_cast<std::size_t>(i)]);
                    g2 += gi * gi;
                    gx += gi * mu[static_cast<std::size_t>(i)];
                }
                const double slack = (to_double(f.offset) - gx) / std::sqrt(g2);
                if (slack < min_slack) {
                    min_slack = slack;
                    offender = mu;
                }
            }
        }
        if (!(min_slack > 1e-9))
            throw RegionError(offender, "inner box is not compactly inside the essential body");
    }

    GluingCertificate cert;
    cert.requested_delta = delta;
    cert.inner = inner;
    cert.outer = outer;
    cert.grid = grid;
    cert.ball_radius = ball_radius;

    const auto secs = rescale_symbolic(basis, gamma);
    const Cutoff cut(inner, outer);
    const auto kgrid = box_grid(outer, grid);

    // strict convexity of u_A - 4 delta f at the requested delta, halving as needed
    double d = delta;
    int halvings = 0;
    for (; halvings <= 20; ++halvings) {
        const double floor = psd_floor(model, cut, d, kgrid);
        if (floor >= psd_threshold) break;
        d *= 0.5;
    }
    if (halvings > 20) {
        cert.failure_reason = "cutoff destroys strict convexity even after 20 delta halvings";
        return cert;
    }
    cert.delta = d;
    cert.delta_halvings = halvings;
    cert.psd_floor_phi = psd_floor(model, cut, d, kgrid);

    const auto inner_pts = box_grid(inner, grid);
    const auto collar_pts = boundary_grid(outer, grid);

    if (first_tau_exponent < 1 || first_tau_exponent > 30)
        throw InputError("tau start must be 2^-j with 1 <= j <= 30");
    Rat tau(1);
    for (int j = 1; j <= 30; ++j) {
        tau /= 2;
        if (j < first_tau_exponent) continue;
        const double tau_d = to_double(tau);
        const double log_tau = std::log(tau_d);

        // the rescaled chart must stay inside the reference ball over K
        double sup2 = 0.0;
        for (int i = 0; i < n; ++i)
            sup2 += std::exp(2.0 * static_cast<double>(gamma[static_cast<std::size_t>(i)]) * log_tau +
                             outer.hi[static_cast<std::size_t>(i)]);
        if (std::sqrt(sup2) > ball_radius) continue;

        const auto scan = scan_bands(model, secs, log_tau, d, inner_pts, collar_pts);
        if (!(scan.min_inner > 0.0) || !(scan.min_collar > 0.0)) {
            cert.failure_reason = scan.min_inner <= 0.0
                                      ? "inner band inequality fails"
                                      : "collar band inequality fails";
            cert.min_margin_inner = scan.min_inner;
            cert.min_margin_collar = scan.min_collar;
            continue;
        }

        cert.success = true;
        cert.failure_reason.clear();
        cert.tau = tau;
        cert.tau_exponent = j;
        cert.rescaled_sup_norm = std::sqrt(sup2);
        cert.margins_inner = scan.margins_inner;
        cert.margins_collar = scan.margins_collar;
        cert.min_margin_inner = scan.min_inner;
        cert.min_margin_collar = scan.min_collar;
        cert.argmin_inner = scan.argmin_inner;
        cert.argmin_collar = scan.argmin_collar;

        const auto psi = phase_average(secs, log_tau, n);
        cert.psd_floor_glued = psd_floor_glued(model, cut, psi, d, kgrid);

        // pointwise regularized-max equalities: the winning branch must clear
        // the smoothing width, which makes reg_max agree with it identically
        bool equal_ok = true;
        for (const auto& x : inner_pts) {
            const double a = potential(model, x); // f == 0 here
            const double b = psi.value(x) - 2.0 * d;
            if (!(a - b >= d)) equal_ok = false;
        }
        for (const auto& x : collar_pts) {
            const double a = potential(model, x) - 4.0 * d;
            const double b = psi.value(x) - 2.0 * d;
            if (!(b - a >= d)) equal_ok = false;
        }
        cert.pointwise_equalities = equal_ok;

        // stability: doubling the grid must not flip any sign
        const int g2 = 2 * grid;
        const auto inner2 = box_grid(inner, g2);
        const auto collar2 = boundary_grid(outer, g2);
        const auto scan2 = scan_bands(model, secs, log_tau, d, inner2, collar2);
        cert.doubled_min_margin_inner = scan2.min_inner;
        cert.doubled_min_margin_collar = scan2.min_collar;
        cert.doubled_psd_floor_phi = psd_floor(model, cut, d, box_grid(outer, g2));
        cert.grid_stable = scan2.min_inner > 0.0 && scan2.min_collar > 0.0 &&
                           cert.doubled_psd_floor_phi >= psd_threshold;
        break;
    }
    if (!cert.success && cert.failure_reason.empty())
        cert.failure_reason = "no admissible tau above 2^-30";
    return cert;
}

/// Box in x-coordinates, centered at the preimage of the body centroid, whose
/// moment image stays inside the body scaled by `shrink` about its centroid.
/// The half-width is the largest dyadic value accepted by a face-grid probe;
/// like every grid statement here, this is evidence at the probe resolution,
/// controlled downstream by the certificate's own grid checks.
inline Box shrink_box(const MomentModel& model, double shrink, int probe = 9) {
    if (!(shrink > 0 && shrink < 1)) throw InputError("shrink factor must lie in (0,1)");
    const RatPolytope hull = model.hull();
    if (!hull.full_dimensional()) throw InputError("shrink_box needs a full-dimensional body");
    const int n = model.n;
    std::vector<double> centroid(static_cast<std::size_t>(n), 0.0);
    for (const auto& v : hull.vertices())
        for (int i = 0; i < n; ++i) centroid[static_cast<std::size_t>(i)] += to_double(v[static_cast<std::size_t>(i)]);
    for (auto& c : centroid) c /= static_cast<double>(hull.vertices().size());

    struct Plane {
        std::vector<double> g;
        double cap;
    };
    std::vector<Plane> target;
    for (const auto& f : hull.facets()) {
        Plane p;
        double gc = 0.0;
        for (int i = 0; i < n; ++i) {
            p.g.push_back(to_double(f.normal[static_cast<std::size_t>(i)]));
            gc += p.g.back() * centroid[static_cast<std::size_t>(i)];
        }
        p.cap = shrink * to_double(f.offset) + (1.0 - shrink) * gc;
        target.push_back(std::move(p));
    }

    const auto xc = moment_preimage(model, centroid);
    auto image_ok = [&](const Box& b) {
        for (const auto& x : gluedetail::boundary_grid(b, probe)) {
            const auto mu = moment_map(model, x);
            for (const auto& p : target) {
                double gx = 0.0;
                for (int i = 0; i < n; ++i) gx += p.g[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(i)];
                if (!(gx < p.cap)) return false;
            }
        }
        return true;
    };
    auto box_of = [&](double h) {
        std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            lo[static_cast<std::size_t>(i)] = xc[static_cast<std::size_t>(i)] - h;
            hi[static_cast<std::size_t>(i)] = xc[static_cast<std::size_t>(i)] + h;
        }
        return Box::of(std::move(lo), std::move(hi));
    };
    double lo = 0.0, hi = 16.0;
    if (!image_ok(box_of(1e-6))) throw NumericError("shrink_box: no admissible box at the centroid");
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (image_ok(box_of(mid)))
            lo = mid;
        else
            hi = mid;
    }
    if (lo <= 0.0) throw NumericError("shrink_box: degenerate box");
    return box_of(lo);
}

inline std::string format_certificate(const GluingCertificate& c) {
    std::ostringstream os;
    os << "gluing certificate\n";
    os << "  delta: requested " << c.requested_delta << ", used " << c.delta;
    if (c.delta_halvings) os << " (" << c.delta_halvings << " halvings)";
    os << "\n";
    if (!c.success) {
        os << "  result: FAILED - " << c.failure_reason << "\n";
        os << "  last margins: inner " << c.min_margin_inner << ", collar " << c.min_margin_collar
           << "\n";
        return os.str();
    }
    os << "  tau: 2^-" << c.tau_exponent << " = " << to_double(c.tau) << "\n";
    os << "  grid: " << c.grid << " per axis (stability at " << 2 * c.grid << ")\n";
    os << "  rescaled sup-norm over K: " << c.rescaled_sup_norm << " <= ball "
       << c.ball_radius << "\n";
    os << "  band margin on U:  min " << c.min_margin_inner << "\n";
    os << "  band margin at dK: min " << c.min_margin_collar << "\n";
    os << "  psd floor of phi:   " << c.psd_floor_phi << "\n";
    os << "  psd floor of glued: " << c.psd_floor_glued << "\n";
    os << "  pointwise regmax equalities: " << (c.pointwise_equalities ? "hold" : "VIOLATED")
       << "\n";
    os << "  doubled grid: margins " << c.doubled_min_margin_inner << " / "
       << c.doubled_min_margin_collar << ", psd " << c.doubled_psd_floor_phi << " -> "
       << (c.grid_stable ? "stable" : "UNSTABLE") << "\n";
    os << "  result: CERTIFIED\n";
    return os.str();
}

} // namespace oklab
