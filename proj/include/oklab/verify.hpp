#pragma once

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oklab/cap.hpp"
#include "oklab/degeneration.hpp"
#include "oklab/io.hpp"
#include "oklab/moment.hpp"
#include "oklab/order.hpp"
#include "oklab/polytope.hpp"
#include "oklab/quadrature.hpp"
#include "oklab/sections.hpp"

namespace oklab {

struct PropResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Bound on the Hausdorff distance from Conv(A) to the moment image of the
/// sup-box [-R, R]^n. Probe points cover the body at spacing `mesh_cell`
/// (interior grid nodes plus boundary samples in dimensions 1 and 2); each
/// probe is pulled `pull` towards the centroid and Newton-inverted through
/// the moment map. Every body point then lies within
///   pull + residual + mesh_cell * (sqrt(n) + 1/2)
/// of an image point of the box, which is what this returns. A large
/// sentinel signals a preimage escaping the box.
inline double image_hausdorff_bound(const MomentModel& A, double R, double mesh_cell,
                                    double pull = 2e-3) {
    const RatPolytope hull = A.hull();
    if (!hull.full_dimensional()) throw InputError("hausdorff bound needs a full-dim body");
    const int n = A.n;
    std::vector<double> centroid(static_cast<std::size_t>(n), 0.0);
    double maxc = 0.0;
    for (const auto& v : hull.vertices())
        for (int i = 0; i < n; ++i) {
            centroid[static_cast<std::size_t>(i)] += to_double(v[static_cast<std::size_t>(i)]);
            maxc = std::max(maxc, to_double(v[static_cast<std::size_t>(i)]));
        }
    for (auto& c : centroid) c /= static_cast<double>(hull.vertices().size());

    std::vector<std::pair<std::vector<double>, double>> planes; // unit (g, c)
    for (const auto& f : hull.facets()) {
        std::vector<double> g;
        double norm = 0.0;
        for (const auto& v : f.normal) {
            g.push_back(to_double(v));
            norm += g.back() * g.back();
        }
        norm = std::sqrt(norm);
        for (auto& v : g) v /= norm;
        planes.emplace_back(std::move(g), to_double(f.offset) / norm);
    }
    auto inside = [&](const std::vector<double>& q) {
        for (const auto& [g, c] : planes) {
            double gx = 0.0;
            for (int i = 0; i < n; ++i) gx += g[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)];
            if (gx > c + 1e-12) return false;
        }
        return true;
    };

    // probe set: interior grid nodes plus boundary samples
    std::vector<std::vector<double>> probes;
    {
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        const int steps = std::max(2, static_cast<int>(std::ceil(maxc / mesh_cell)));
        for (;;) {
            std::vector<double> q(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                q[static_cast<std::size_t>(i)] = maxc * idx[static_cast<std::size_t>(i)] / steps;
            if (inside(q)) probes.push_back(q);
            int i = n - 1;
            for (; i >= 0; --i) {
                if (++idx[static_cast<std::size_t>(i)] <= steps) break;
                idx[static_cast<std::size_t>(i)] = 0;
            }
            if (i < 0) break;
        }
        for (const auto& v : hull.vertices()) probes.push_back(to_doubles(v));
        if (n == 2) {
            // sample the polygon edges at the cell spacing
            for (const auto& f : hull.facets()) {
                if (f.vertex_ids.size() != 2) continue;
                const auto a = to_doubles(hull.vertices()[f.vertex_ids[0]]);
                const auto b = to_doubles(hull.vertices()[f.vertex_ids[1]]);
                const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
                const int m = std::max(1, static_cast<int>(std::ceil(len / mesh_cell)));
                for (int s = 1; s < m; ++s) {
                    const double t = static_cast<double>(s) / m;
                    probes.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
                }
            }
        }
    }

    double worst = 0.0;
    std::vector<double> x(static_cast<std::size_t>(n), 0.0); // warm-started preimage
    for (const auto& q : probes) {
        std::vector<double> target(static_cast<std::size_t>(n));
        double dist = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = centroid[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)];
            dist += d * d;
        }
        dist = std::sqrt(dist);
        const double t = dist < 1e-12 ? 0.0 : std::min(1.0, pull / dist);
        for (int i = 0; i < n; ++i)
            target[static_cast<std::size_t>(i)] =
                q[static_cast<std::size_t>(i)] +
                t * (centroid[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)]);
        x = moment_preimage_from(A, target, x);
        double off = 0.0, res = 0.0;
        const auto mu = moment_map(A, x);
        for (int i = 0; i < n; ++i) {
            off = std::max(off, std::abs(x[static_cast<std::size_t>(i)]));
            const double r = mu[static_cast<std::size_t>(i)] - target[static_cast<std::size_t>(i)];
            res += r * r;
        }
        if (off > R || std::sqrt(res) > 1e-6) return 1e9;
        worst = std::max(worst, pull + std::sqrt(res));
    }
    return worst + mesh_cell * (std::sqrt(static_cast<double>(n)) + 0.5);
}

namespace verifydetail {

inline Exponent random_exponent(std::mt19937_64& rng, int n, int maxc) {
    std::uniform_int_distribution<int> d(0, maxc);
    std::vector<int> c(static_cast<std::size_t>(n));
    for (auto& v : c) v = d(rng);
    return Exponent(std::move(c));
}

/// Random exponent with bounded total degree (rejection sampling).
inline Exponent random_exponent_deg(std::mt19937_64& rng, int n, int maxdeg) {
    for (;;) {
        const Exponent e = random_exponent(rng, n, maxdeg);
        if (e.total_degree() <= maxdeg) return e;
    }
}

inline Rat random_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    return Rat(num(rng), den(rng));
}

inline PolySection random_section(std::mt19937_64& rng, int n, int terms, int maxdeg) {
    PolySection s(n);
    std::uniform_int_distribution<int> tcount(1, terms);
    const int t = tcount(rng);
    for (int i = 0; i < t; ++i) {
        Rat c = random_rat(rng);
        if (c == 0) c = 1;
        s.add_term(random_exponent(rng, n, maxdeg), c);
    }
    if (s.is_zero()) s.add_term(Exponent::zero(n), Rat(1));
    return s;
}

inline std::vector<OrderSpec> standard_orders(int n) {
    std::vector<std::int64_t> w;
    for (int i = 0; i < n; ++i) w.push_back(2 * i + 3);
    return {OrderSpec::lex(), OrderSpec::deglex(), OrderSpec::weighted(w)};
}

inline CoordinateChange conic_chart() {
    CoordinateChange cc;
    cc.forward = {PolySection::monomial(Exponent{0, 1}),
                  PolySection::monomial(Exponent{1, 0}) + PolySection::monomial(Exponent{0, 2})};
    cc.inverse = {PolySection::monomial(Exponent{0, 1}) - PolySection::monomial(Exponent{2, 0}),
                  PolySection::monomial(Exponent{1, 0})};
    return cc;
}

} // namespace verifydetail

/// Runs every module's property suite with the given seed. The CLI `verify`
/// subcommand prints these and exits nonzero if any fails.
inline std::vector<PropResult> run_property_suite(std::uint64_t seed, bool fast = false) {
    using namespace verifydetail;
    std::vector<PropResult> out;
    std::mt19937_64 rng(seed);
    auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back(PropResult{name, pass, detail});
    };

    // ---- order ----------------------------------------------------------
    {
        bool total = true, additive = true, refines = true;
        const int samples = fast ? 1000 : 10000;
        for (int n = 1; n <= 4 && total && additive; ++n) {
            for (const auto& ord : standard_orders(n)) {
                for (int s = 0; s < samples / 4; ++s) {
                    const Exponent a = random_exponent(rng, n, 6), b = random_exponent(rng, n, 6),
                                   c = random_exponent(rng, n, 6);
                    const Ordering ab = compare(ord, a, b), ba = compare(ord, b, a);
                    if (ab == Ordering::Equal && !(a == b)) total = false;
                    if (a == b && ab != Ordering::Equal) total = false;
                    if (ab == Ordering::Less && ba != Ordering::Greater) total = false;
                    if (compare(ord, a + c, b + c) != ab) additive = false;
                }
            }
        }
        for (int s = 0; s < samples; ++s) {
            const Exponent a = random_exponent(rng, 3, 6), b = random_exponent(rng, 3, 6);
            if (a.total_degree() < b.total_degree() &&
                compare(OrderSpec::deglex(), a, b) != Ordering::Less)
                refines = false;
        }
        report("order: totality and antisymmetry", total);
        report("order: additivity under translation", additive);
        report("order: deglex refines total degree", refines);

        bool sep = true;
        const int runs = fast ? 12 : 40;
        for (int r = 0; r < runs && sep; ++r) {
            std::uniform_int_distribution<int> nd(1, 4), sz(1, 20);
            const int n = nd(rng);
            std::set<Exponent> A;
            // no more distinct exponents of degree <= 5 exist than binom(5+n, n)
            const int avail = static_cast<int>(binomial(static_cast<unsigned>(5 + n),
                                                        static_cast<unsigned>(n)));
            const int count = std::min(sz(rng), avail);
            while (static_cast<int>(A.size()) < count) A.insert(random_exponent_deg(rng, n, 5));
            std::vector<Exponent> Av(A.begin(), A.end());
            for (const auto& ord : standard_orders(n)) {
                const auto gamma = separating_weight(ord, Av);
                const auto C = separating_degree_bound(Av);
                if (!verify_separation(ord, Av, gamma, static_cast<int>(3 * C))) sep = false;
            }
        }
        report("order: separating weight verified on [0,3C]^n for all base orders", sep);
    }

    // ---- sections --------------------------------------------------------
    {
        bool val_add = true;
        const int samples = fast ? 200 : 1000;
        for (int s = 0; s < samples; ++s) {
            std::uniform_int_distribution<int> nd(1, 3);
            const int n = nd(rng);
            const auto orders = standard_orders(n);
            const PolySection f = random_section(rng, n, 4, 4), g = random_section(rng, n, 4, 4);
            const PolySection fg = f * g;
            for (const auto& ord : orders)
                if (!(fg.valuation(ord) == f.valuation(ord) + g.valuation(ord))) val_add = false;
        }
        report("sections: valuation is additive under products", val_add);

        bool card = true, shape = true, stable = true;
        for (int trial = 0; trial < (fast ? 4 : 10); ++trial) {
            SectionSpace sp = model_sections(ModelSpec::projective_space(2, 1 + trial % 2), 1);
            // random unimodular recombination keeps independence and dimension
            std::uniform_int_distribution<int> pick(0, static_cast<int>(sp.basis.size()) - 1);
            for (int mix = 0; mix < 8; ++mix) {
                const int i = pick(rng), j = pick(rng);
                if (i != j) sp.basis[static_cast<std::size_t>(i)] += random_rat(rng) * sp.basis[static_cast<std::size_t>(j)];
            }
            for (const auto& ord : standard_orders(2)) {
                const LeadingSet L = eliminate(ord, sp);
                if (L.exponents.size() != sp.basis.size()) card = false;
                std::set<Exponent> A(L.exponents.begin(), L.exponents.end());
                for (std::size_t i = 0; i < L.exponents.size(); ++i) {
                    if (!(L.distinguished[i].coeff(L.exponents[i]) == 1)) shape = false;
                    for (const auto& [e, c] : L.distinguished[i].terms())
                        if (!(e == L.exponents[i]) && A.count(e)) shape = false;
                }
                SectionSpace again{sp.dim_ambient, sp.level, L.distinguished};
                const LeadingSet L2 = eliminate(ord, again);
                if (!(L2.exponents == L.exponents)) stable = false;
                for (std::size_t i = 0; i < L.distinguished.size(); ++i)
                    if (!(L2.distinguished[i] == L.distinguished[i])) stable = false;
            }
        }
        report("sections: |A(kL)| equals the space dimension", card);
        report("sections: distinguished basis has the normal-form shape", shape);
        report("sections: elimination is stable on its own output", stable);

        bool semi = true;
        std::vector<ModelSpec> models{ModelSpec::projective_space(2, 1),
                                      ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}),
                                      ModelSpec::toric({{0, 0}, {2, 0}, {0, 1}, {2, 1}})};
        for (const auto& m : models)
            for (int k = 1; k <= 3; ++k)
                for (int l = 1; k + l <= 4; ++l) {
                    const auto Ak = eliminate(OrderSpec::lex(), model_sections(m, k)).exponents;
                    const auto Al = eliminate(OrderSpec::lex(), model_sections(m, l)).exponents;
                    const auto Akl = eliminate(OrderSpec::lex(), model_sections(m, k + l)).exponents;
                    std::set<Exponent> S(Akl.begin(), Akl.end());
                    for (const auto& a : Ak)
                        for (const auto& b : Al)
                            if (!S.count(a + b)) semi = false;
                }
        report("sections: A(k)+A(m) lands in A(k+m)", semi);
    }

    // ---- bodies ----------------------------------------------------------
    {
        bool idem = true;
        for (int t = 0; t < (fast ? 5 : 20); ++t) {
            std::uniform_int_distribution<int> nd(1, 3), cnt(2, 12);
            const int n = nd(rng), m = cnt(rng);
            std::vector<RatVec> pts;
            for (int i = 0; i < m; ++i) {
                RatVec p;
                for (int j = 0; j < n; ++j) {
                    Rat r = random_rat(rng);
                    if (r < 0) r = -r;
                    p.push_back(r);
                }
                pts.push_back(std::move(p));
            }
            const RatPolytope P = convex_hull(pts);
            if (!P.is_empty() && !(convex_hull(P.vertices()) == P)) idem = false;
        }
        report("bodies: hull is idempotent on its vertex list", idem);

        bool mono = true;
        for (const auto& m : {ModelSpec::projective_space(2, 2),
                              ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}})}) {
            BodyApprox chain;
            for (int k : {1, 2, 3, 4})
                chain.levels.emplace_back(k, delta_k(eliminate(OrderSpec::lex(), model_sections(m, k))));
            if (!chain.inclusions_hold()) mono = false;
        }
        report("bodies: Delta_k chain is monotone along divisibility", mono);

        bool ess_reach = true;
        {
            const auto m = ModelSpec::toric({{0, 0}, {2, 0}, {0, 3}, {2, 3}});
            const RatPolytope limit = delta_k(eliminate(OrderSpec::lex(), model_sections(m, 1)));
            std::uniform_int_distribution<int> num(0, 24);
            for (int t = 0; t < 50; ++t) {
                RatVec x{Rat(num(rng), 12), Rat(num(rng), 8)};
                if (!essential_membership(limit, x)) continue;
                bool found = false;
                for (int k = 1; k <= 6 && !found; ++k) {
                    const auto dk = delta_k(eliminate(OrderSpec::lex(), model_sections(m, k)));
                    if (essential_membership(dk, x)) found = true;
                }
                if (!found) ess_reach = false;
            }
        }
        report("bodies: essential points are reached at finite level on toric models", ess_reach);

        bool sweep = true;
        {
            const RatPolytope P = delta_k(eliminate(
                OrderSpec::lex(), model_sections(ModelSpec::projective_space(2, 3), 1)));
            const int steps = 200;
            const double h = 3.0 / steps;
            double acc = 0.0;
            for (int i = 0; i < steps; ++i) {
                const Rat r(2 * i + 1, 2 * steps / 3); // midpoints of [0,3]
                const RatPolytope s = slice(P, 0, r);
                if (!s.is_empty()) acc += to_double(s.volume()) * h;
            }
            if (std::abs(acc - to_double(P.volume())) > h * 3.0 * 2) sweep = false;
        }
        report("bodies: slice sweep Riemann-approximates the volume", sweep);

        bool ses = true;
        for (int t = 0; t < 30; ++t) {
            Rat r = random_rat(rng);
            if (r <= 0) r = Rat(1) - r;
            if (r == 0) r = 1;
            RatVec a{r, r};
            if (!(seshadri_param(simplex_body(a)) == r)) ses = false;
        }
        report("bodies: seshadri parameter of t*simplex is t", ses);

        bool torus = true;
        {
            const RatPolytope P = simplex_body(RatVec{Rat(1), Rat(1)});
            std::uniform_int_distribution<int> num(-6, 6), den(7, 11);
            for (int t = 0; t < 200; ++t) {
                std::vector<std::pair<Rat, Rat>> z{{Rat(num(rng), den(rng)), Rat(num(rng), den(rng))},
                                                   {Rat(num(rng), den(rng)), Rat(num(rng), den(rng))}};
                auto rotated = z;
                // unimodular rational rotation (3/5, 4/5) on the first factor
                rotated[0] = {Rat(3, 5) * z[0].first - Rat(4, 5) * z[0].second,
                              Rat(4, 5) * z[0].first + Rat(3, 5) * z[0].second};
                if (domain_membership(P, z) != domain_membership(P, rotated)) torus = false;
            }
        }
        report("bodies: domain membership is torus invariant", torus);
    }

    // ---- moment ----------------------------------------------------------
    {
        const auto A = MomentModel::from_exponents(
            eliminate(OrderSpec::lex(), model_sections(ModelSpec::projective_space(2, 2), 1))
                .exponents);
        const RatPolytope hull = A.hull();
        bool interior = true, fd = true;
        std::uniform_real_distribution<double> xr(-6.0, 6.0);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> x{xr(rng), xr(rng)};
            const auto mu = moment_map(A, x);
            for (const auto& f : hull.facets()) {
                double slack = to_double(f.offset);
                for (int i = 0; i < 2; ++i)
                    slack -= to_double(f.normal[static_cast<std::size_t>(i)]) * mu[static_cast<std::size_t>(i)];
                if (!(slack > 1e-9)) interior = false;
            }
            const SymMat H = hessian(A, x);
            const double h = 1e-4;
            for (int i = 0; i < 2; ++i) {
                auto xp = x, xm = x;
                xp[static_cast<std::size_t>(i)] += h;
                xm[static_cast<std::size_t>(i)] -= h;
                const auto gp = moment_map(A, xp), gm = moment_map(A, xm);
                for (int j = 0; j < 2; ++j) {
                    const double fdv = (gp[static_cast<std::size_t>(j)] - gm[static_cast<std::size_t>(j)]) / (2 * h);
                    if (std::abs(fdv - H.at(i, j)) > 1e-6) fd = false;
                }
            }
        }
        report("moment: map lands in the hull interior", interior);
        report("moment: hessian matches finite differences of the gradient", fd);

        QuadOptions q;
        q.rel_tol = fast ? 3e-2 : 1e-2;
        const double vol = symplectic_volume_all(A, q);
        const double exact = to_double(hull.volume());
        report("moment: quadrature volume matches the body volume",
               std::abs(vol - exact) <= 0.01 * exact * 1.5,
               "quadrature " + std::to_string(vol) + " vs exact " + std::to_string(exact));

        bool rmx = true;
        RegMax rm(0.7);
        std::uniform_real_distribution<double> vr(-3.0, 3.0);
        for (int t = 0; t < 500; ++t) {
            const double a = vr(rng), b = vr(rng);
            const double v = rm(a, b);
            if (v < std::max(a, b) - 1e-12) rmx = false;
            if (std::abs(a - b) >= rm.delta && std::abs(v - std::max(a, b)) > 1e-13) rmx = false;
            if (std::abs(rm(a, b) - rm(b, a)) > 1e-13) rmx = false;
            if (rm.curvature(a, b) < 0) rmx = false;
        }
        report("moment: regularized max has the defining properties", rmx);

        {
            const auto sq = MomentModel::from_exponents(
                eliminate(OrderSpec::lex(),
                          model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1))
                    .exponents);
            const double hd = image_hausdorff_bound(sq, 40.0, 4e-3, 2e-3);
            report("moment: image is dense in the body at R=40", hd <= 1e-2,
                   "hausdorff bound " + std::to_string(hd));
        }

        bool capok = true;
        {
            const auto A1 = MomentModel::from_exponents({Exponent{0}, Exponent{4}});
            const auto field = capped_potential(A1, Box::of({0.0}, {std::log(2.0)}), 0.5, 0.1);
            const auto audit = audit_field(field, fast ? 11 : 31, 6.0);
            if (!audit.pass()) capok = false;
            bool threw = false;
            try {
                capped_potential(A1, Box::of({0.0}, {std::log(5.0)}), 0.5, 0.1);
            } catch (const RegionError&) {
                threw = true;
            }
            if (!threw) capok = false;
        }
        report("moment: capped potential passes its grid audit", capok);
    }

    // ---- degeneration ----------------------------------------------------
    {
        const auto chart = conic_chart();
        auto spec = ModelSpec::projective_space(2, 2);
        spec.chart = chart;
        const LeadingSet L = eliminate(OrderSpec::lex(), model_sections(spec, 1));
        const auto gamma = separating_weight(L.order, L.exponents);

        bool lead = true;
        for (const auto& r : rescale_symbolic(L, gamma))
            for (const auto& t : r.tail)
                if (t.tau_pow < 1) lead = false;
        report("degeneration: rescaled tails all carry tau powers >= 1", lead);

        bool decay = true;
        const double C = degeneration_error_constant(L, gamma);
        for (int j = 1; j <= 10; ++j) {
            DegenerationRun run(L, gamma, Rat(1, 1 << j));
            if (degeneration_error(run) > C * to_double(run.tau) + 1e-15) decay = false;
        }
        report("degeneration: error bound decays linearly in tau", decay);

        bool envelope = true;
        {
            DegenerationRun run(L, gamma, Rat(1, 8));
            const auto rs = rescale_basis(run);
            const auto secs = rescale_symbolic(L, gamma);
            std::uniform_real_distribution<double> xr(-2.0, 0.5), ph(0.0, 6.283185307179586);
            for (int t = 0; t < (fast ? 40 : 200); ++t) {
                std::vector<double> x{xr(rng), xr(rng)};
                const auto env = gluedetail::psi_envelopes(secs, std::log(to_double(run.tau)), x);
                std::vector<std::complex<double>> z(2);
                for (int i = 0; i < 2; ++i)
                    z[static_cast<std::size_t>(i)] =
                        std::polar(std::exp(0.5 * x[static_cast<std::size_t>(i)]), ph(rng));
                double sum = 0.0;
                for (const auto& r : rs) sum += std::norm(r.eval(z));
                const double psi = std::log(sum);
                if (psi > env.up + 1e-9) envelope = false;
                if (env.low != -std::numeric_limits<double>::infinity() && psi < env.low - 1e-9)
                    envelope = false;
            }
        }
        report("degeneration: envelopes bracket the sampled torus values", envelope);

        bool certd = true;
        {
            const auto toric = eliminate(
                OrderSpec::lex(), model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1));
            const auto gt = separating_weight(toric.order, toric.exponents);
            const Box U = Box::of({-1.0, -1.0}, {1.0, 1.0});
            const Box K = Box::of({-2.0, -2.0}, {2.0, 2.0});
            const auto c1 = gluing_certificate(toric, gt, U, K, 1e-2, 12);
            const auto c2 = gluing_certificate(toric, gt, U, K, 1e-2, 12);
            if (!c1.success || !c2.success) certd = false;
            if (!(c1.tau == c2.tau) || c1.min_margin_inner != c2.min_margin_inner ||
                c1.min_margin_collar != c2.min_margin_collar)
                certd = false;
            if (std::abs(c1.min_margin_inner - c1.delta) > 1e-12 ||
                std::abs(c1.min_margin_collar - c1.delta) > 1e-12)
                certd = false;
        }
        report("degeneration: toric certificate is trivial and deterministic", certd);
    }

    // ---- file round trips --------------------------------------------------
    {
        bool rt = true;
        const auto sp = model_sections(ModelSpec::projective_space(2, 2), 2);
        const auto text = emit_section_space(sp);
        const auto back = parse_section_space(text);
        if (emit_section_space(back) != text) rt = false;
        const auto P = simplex_body(RatVec{Rat(1), Rat(1), Rat(4)});
        const auto ptext = emit_polytope(P);
        if (!(parse_polytope(ptext) == P) || emit_polytope(parse_polytope(ptext)) != ptext)
            rt = false;
        report("io: emitted files re-parse to identical objects", rt);
    }

    return out;
}

} // namespace oklab
