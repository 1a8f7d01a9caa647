// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and runtime budgets are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oklab/cap.hpp"
#include "oklab/degeneration.hpp"
#include "oklab/moment.hpp"
#include "oklab/order.hpp"
#include "oklab/polytope.hpp"
#include "oklab/quadrature.hpp"
#include "oklab/sections.hpp"
#include "oklab/verify.hpp"

using namespace oklab;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void line(int id, const std::string& name, bool pass, double secs, const std::string& detail = "") {
    std::printf("%s  %2d  %-34s %6.2fs%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(), secs,
                detail.empty() ? "" : "  ", detail.c_str());
    if (!pass) ++failures;
}

CoordinateChange conic_chart() {
    CoordinateChange cc;
    cc.forward = {PolySection::monomial(Exponent{0, 1}),
                  PolySection::monomial(Exponent{1, 0}) + PolySection::monomial(Exponent{0, 2})};
    cc.inverse = {PolySection::monomial(Exponent{0, 1}) - PolySection::monomial(Exponent{2, 0}),
                  PolySection::monomial(Exponent{1, 0})};
    return cc;
}

LeadingSet conic_basis(int k) {
    auto spec = ModelSpec::projective_space(2, 2);
    spec.chart = conic_chart();
    return eliminate(OrderSpec::lex(), model_sections(spec, k));
}

// 1. curve bodies are exactly [0, d], all small d and k
void criterion_curve() {
    Timer t;
    bool ok = true;
    for (int d = 1; d <= 6; ++d)
        for (int k = 1; k <= 3; ++k) {
            const RatPolytope D =
                delta_k(eliminate(OrderSpec::lex(), model_sections(ModelSpec::curve(d), k)));
            if (!(D.vertices() == std::vector<RatVec>{RatVec{Rat(0)}, RatVec{Rat(d)}})) ok = false;
        }
    const double secs = t.seconds();
    line(1, "curve body = [0, d] exactly", ok && secs < 1.0, secs);
}

// 2. n! vol(Delta_1) = d^n exactly on projective space
void criterion_volume_identity() {
    Timer t;
    bool ok = true;
    for (int n = 1; n <= 3; ++n)
        for (int d = 1; d <= 3; ++d) {
            const RatPolytope D = delta_k(
                eliminate(OrderSpec::lex(), model_sections(ModelSpec::projective_space(n, d), 1)));
            Rat fact = 1;
            for (int i = 2; i <= n; ++i) fact *= i;
            if (!(fact * D.volume() == int_pow(Int(d), static_cast<unsigned>(n)))) ok = false;
        }
    const double secs = t.seconds();
    line(2, "n!*vol(Delta_1) = d^n exactly", ok && secs < 5.0, secs);
}

// 3. |A(kL)| = binom(kd + n, n) exactly
void criterion_cardinality() {
    Timer t;
    bool ok = true;
    for (int n = 1; n <= 3; ++n)
        for (int d = 1; d <= 3; ++d)
            for (int k = 1; k <= 3; ++k) {
                const LeadingSet L = eliminate(
                    OrderSpec::lex(), model_sections(ModelSpec::projective_space(n, d), k));
                if (!(Int(L.exponents.size()) ==
                      binomial(static_cast<unsigned>(k * d + n), static_cast<unsigned>(n))))
                    ok = false;
            }
    line(3, "|A(kL)| = binom(kd+n, n)", ok, t.seconds());
}

// 4. A(k) + A(m) inside A(k+m), exhaustively
void criterion_semigroup() {
    Timer t;
    bool ok = true;
    const std::vector<ModelSpec> models{ModelSpec::projective_space(2, 1),
                                        ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}),
                                        ModelSpec::toric({{0, 0}, {2, 0}, {0, 1}, {2, 1}})};
    for (const auto& m : models) {
        std::vector<std::vector<Exponent>> A(5);
        for (int k = 1; k <= 4; ++k)
            A[static_cast<std::size_t>(k)] =
                eliminate(OrderSpec::lex(), model_sections(m, k)).exponents;
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; k + l <= 4; ++l) {
                const std::set<Exponent> S(A[static_cast<std::size_t>(k + l)].begin(),
                                           A[static_cast<std::size_t>(k + l)].end());
                for (const auto& a : A[static_cast<std::size_t>(k)])
                    for (const auto& b : A[static_cast<std::size_t>(l)])
                        if (!S.count(a + b)) ok = false;
            }
    }
    line(4, "semigroup A(k)+A(m) in A(k+m)", ok, t.seconds());
}

// 5. conic flag on P^2, O(2): bodies inside Sigma_(1,4), volume converged
void criterion_special_flag() {
    Timer t;
    bool ok = true;
    const RatPolytope sigma = simplex_body(RatVec{Rat(1), Rat(4)});
    RatPolytope last;
    for (int k = 1; k <= 3; ++k) {
        const RatPolytope D = delta_k(conic_basis(k));
        if (!contains_polytope(sigma, D)) ok = false;
        last = D;
    }
    if (!(Rat(2) * last.volume() >= Rat(7, 2))) ok = false; // 2! vol(Delta_3) >= 3.5
    const double secs = t.seconds();
    line(5, "conic flag body inside Sigma(1,4)", ok && secs < 30.0, secs,
         "2!*vol(Delta_3) = " + format_rat_short(Rat(2) * last.volume()));
}

// 6. exact slice and shift identities on toric models
void criterion_slice_translate() {
    Timer t;
    bool ok = true;
    const auto lex = OrderSpec::lex();

    // unit square: restriction along the first flag divisor
    const RatPolytope sq =
        delta_k(eliminate(lex, model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1)));
    const RatPolytope edge =
        delta_k(eliminate(lex, model_sections(ModelSpec::curve(1), 1))); // [0, 1]
    if (!(slice(sq, 0, Rat(0)) == edge)) ok = false;
    {
        // x1 >= r slices translate: expected [0, 1-r] x [0, 1]
        for (const Rat& r : {Rat(0), Rat(1, 2), Rat(1)}) {
            const RatPolytope got = shift(sq, 0, r);
            std::vector<RatVec> pts{RatVec{Rat(0), Rat(0)}, RatVec{Rat(0), Rat(1)}};
            if (r < 1) {
                pts.push_back(RatVec{Rat(1) - r, Rat(0)});
                pts.push_back(RatVec{Rat(1) - r, Rat(1)});
            }
            if (!(got == convex_hull(pts))) ok = false;
        }
        if (!(slice(sq, 0, Rat(1, 2)) == edge)) ok = false;
        if (!(slice(sq, 0, Rat(1)) == edge)) ok = false;
    }

    // doubled simplex: slices shrink, shifts are translated simplices
    const RatPolytope tri =
        delta_k(eliminate(lex, model_sections(ModelSpec::toric({{0, 0}, {2, 0}, {0, 2}}), 1)));
    if (!(slice(tri, 0, Rat(0)) ==
          delta_k(eliminate(lex, model_sections(ModelSpec::curve(2), 1)))))
        ok = false;
    if (!(slice(tri, 0, Rat(1, 2)) == convex_hull({RatVec{Rat(0)}, RatVec{Rat(3, 2)}}))) ok = false;
    if (!(slice(tri, 0, Rat(1)) == convex_hull({RatVec{Rat(0)}, RatVec{Rat(1)}}))) ok = false;
    if (!(shift(tri, 0, Rat(1, 2)) == simplex_body(RatVec{Rat(3, 2), Rat(3, 2)}))) ok = false;
    if (!(shift(tri, 0, Rat(1)) == simplex_body(RatVec{Rat(1), Rat(1)}))) ok = false;
    if (!(shift(tri, 0, Rat(0)) == tri)) ok = false;

    line(6, "slice/translate identities", ok, t.seconds());
}

// 7. seshadri parameters of the infinitesimal bodies
void criterion_seshadri() {
    Timer t;
    bool ok = true;
    for (int d = 1; d <= 4; ++d) {
        const RatPolytope D = delta_k(
            eliminate(OrderSpec::deglex(), model_sections(ModelSpec::projective_space(2, d), 1)));
        if (!(seshadri_param(D) == d)) ok = false;
    }
    if (!(seshadri_param(simplex_body(RatVec{Rat(1), Rat(1), Rat(4)})) == 1)) ok = false;
    line(7, "seshadri parameters exact", ok, t.seconds());
}

// 8. separating weights verified over [0, 3C]^n for 100 random sets
void criterion_separating_weight() {
    Timer t;
    bool ok = true;
    std::mt19937_64 rng(0);
    std::uniform_int_distribution<int> nd(1, 4), sz(1, 20), coord(0, 5), kind(0, 2);
    for (int run = 0; run < 100; ++run) {
        const int n = nd(rng);
        const int avail = static_cast<int>(
            binomial(static_cast<unsigned>(5 + n), static_cast<unsigned>(n)));
        std::set<Exponent> A;
        const int want = std::min(sz(rng), avail);
        while (static_cast<int>(A.size()) < want) {
            std::vector<int> c(static_cast<std::size_t>(n));
            int deg = 0;
            for (auto& v : c) {
                v = coord(rng);
                deg += v;
            }
            if (deg <= 5) A.insert(Exponent(std::move(c)));
        }
        const std::vector<Exponent> Av(A.begin(), A.end());
        OrderSpec base = OrderSpec::lex();
        const int which = kind(rng);
        if (which == 1) base = OrderSpec::deglex();
        if (which == 2) {
            std::vector<std::int64_t> w;
            for (int i = 0; i < n; ++i) w.push_back(1 + (i * 3) % 5);
            base = OrderSpec::weighted(std::move(w));
        }
        const auto gamma = separating_weight(base, Av);
        const auto C = separating_degree_bound(Av);
        if (!verify_separation(base, Av, gamma, static_cast<int>(3 * C))) ok = false;
    }
    const double secs = t.seconds();
    line(8, "separating weights on 100 random sets", ok && secs < 10.0, secs);
}

// 9. moment-map suite: gradients, image density, volumes, the n! oracle
void criterion_moment_suite() {
    Timer t;
    bool ok = true;
    std::string detail;

    // gradient versus finite differences of the potential
    {
        const auto A = MomentModel::from_exponents(
            eliminate(OrderSpec::lex(), model_sections(ModelSpec::projective_space(2, 2), 1))
                .exponents);
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> xr(-5.0, 5.0);
        const double h = 1e-4;
        for (int s = 0; s < 100; ++s) {
            const std::vector<double> x{xr(rng), xr(rng)};
            const auto g = moment_map(A, x);
            for (int i = 0; i < 2; ++i) {
                auto xp = x, xm = x;
                xp[static_cast<std::size_t>(i)] += h;
                xm[static_cast<std::size_t>(i)] -= h;
                const double fd = (potential(A, xp) - potential(A, xm)) / (2 * h);
                if (std::abs(fd - g[static_cast<std::size_t>(i)]) > 1e-6) ok = false;
            }
        }
    }

    // image density: Hausdorff bound against the body at R = 40
    {
        const std::vector<MomentModel> models{
            MomentModel::from_exponents({Exponent{0}, Exponent{1}, Exponent{2}, Exponent{3},
                                         Exponent{4}}),
            MomentModel::from_exponents(
                eliminate(OrderSpec::lex(), model_sections(ModelSpec::projective_space(2, 1), 1))
                    .exponents),
            MomentModel::from_exponents(
                eliminate(OrderSpec::lex(),
                          model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1))
                    .exponents),
            MomentModel::from_exponents(
                eliminate(OrderSpec::lex(), model_sections(ModelSpec::projective_space(2, 4), 1))
                    .exponents)};
        for (const auto& A : models) {
            const double hd = image_hausdorff_bound(A, 40.0, 4e-3, 2e-3);
            if (!(hd <= 1e-2)) ok = false;
        }
    }

    // quadrature volume against the exact body volume, four models
    {
        std::vector<Exponent> s114;
        for (int k = 0; k <= 4; ++k) s114.push_back(Exponent{0, 0, k});
        s114.push_back(Exponent{1, 0, 0});
        s114.push_back(Exponent{0, 1, 0});
        const std::vector<MomentModel> models{
            MomentModel::from_exponents({Exponent{0}, Exponent{1}, Exponent{2}, Exponent{3}}),
            MomentModel::from_exponents(
                eliminate(OrderSpec::lex(), model_sections(ModelSpec::projective_space(2, 1), 1))
                    .exponents),
            MomentModel::from_exponents(
                eliminate(OrderSpec::lex(),
                          model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1))
                    .exponents),
            MomentModel::from_exponents(std::move(s114))};
        for (const auto& A : models) {
            const double got = symplectic_volume_all(A);
            const double exact = to_double(A.hull().volume());
            if (!(std::abs(got - exact) <= 0.01 * exact)) {
                ok = false;
                detail += "vol " + std::to_string(got) + " vs " + std::to_string(exact) + "; ";
            }
        }
    }

    // the polydisk Monte-Carlo oracle pins the n! convention
    {
        const double mc1 = polydisk_mc_omega_volume({1.2}, 400000, 7);
        if (!(std::abs(mc1 / (1.0 * 1.44) - 1.0) <= 0.01)) ok = false;
        const double mc2 = polydisk_mc_omega_volume({1.0, 1.5}, 400000, 7);
        if (!(std::abs(mc2 / (2.0 * 2.25) - 1.0) <= 0.01)) ok = false;
    }

    line(9, "moment-map suite", ok, t.seconds(), detail);
}

// 10. ellipsoid volumes: quadrature within 1%, polytope route exact
void criterion_ellipsoid() {
    Timer t;
    bool ok = true;
    for (int n : {2, 3})
        for (int d : {2, 4}) {
            std::vector<double> axes(static_cast<std::size_t>(n), 1.0);
            axes.back() = d;
            const double quad = ellipsoid_symplectic_volume(axes);
            if (!(std::abs(quad - d) <= 0.01 * d)) ok = false;

            RatVec a(static_cast<std::size_t>(n), Rat(1));
            a.back() = Rat(d);
            Rat fact = 1;
            for (int i = 2; i <= n; ++i) fact *= i;
            if (!(fact * simplex_body(a).volume() == d)) ok = false;
        }
    line(10, "ellipsoid volume = d (quadrature + exact)", ok, t.seconds());
}

// 11. degeneration error bounded by C tau on the conic flag, zero on toric
void criterion_degeneration_error() {
    Timer t;
    bool ok = true;
    const LeadingSet L = conic_basis(1);
    const auto gamma = separating_weight(L.order, L.exponents);
    const double C = degeneration_error_constant(L, gamma);
    for (int j = 1; j <= 10; ++j) {
        const DegenerationRun run(L, gamma, Rat(1, 1 << j));
        if (!(degeneration_error(run) <= C * to_double(run.tau) + 1e-15)) ok = false;
    }
    const LeadingSet toric = eliminate(
        OrderSpec::lex(), model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1));
    const auto gt = separating_weight(toric.order, toric.exponents);
    for (int j = 1; j <= 10; ++j) {
        const DegenerationRun run(toric, gt, Rat(1, 1 << j));
        if (degeneration_error(run) != 0.0) ok = false;
    }
    line(11, "degeneration error <= C*tau (audited C)", ok, t.seconds(),
         "C = " + std::to_string(C));
}

// 12. gluing certificates: toric trivially, conic flag at grid 64^n
void criterion_gluing() {
    Timer t;
    bool ok = true;
    std::string detail;
    {
        const LeadingSet toric = eliminate(
            OrderSpec::lex(), model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1));
        const auto gt = separating_weight(toric.order, toric.exponents);
        const auto cert =
            gluing_certificate(toric, gt, Box::of({-1.0, -1.0}, {1.0, 1.0}),
                               Box::of({-2.0, -2.0}, {2.0, 2.0}), 1e-2, 64);
        if (!(cert.success && cert.grid_stable && cert.pointwise_equalities)) ok = false;
    }
    {
        const LeadingSet L = conic_basis(1);
        const auto gamma = separating_weight(L.order, L.exponents);
        const auto A = MomentModel::from_leading_set(L);
        const Box U = shrink_box(A, 0.8);
        const Box K = shrink_box(A, 0.95);
        const auto cert = gluing_certificate(L, gamma, U, K, 1e-2, 64);
        if (!(cert.success && cert.grid_stable && cert.pointwise_equalities &&
              cert.min_margin_inner > 0 && cert.min_margin_collar > 0 &&
              cert.psd_floor_phi >= 1e-9))
            ok = false;
        detail = "tau = 2^-" + std::to_string(cert.tau_exponent) +
                 ", margins " + std::to_string(cert.min_margin_inner) + " / " +
                 std::to_string(cert.min_margin_collar);
    }
    const double secs = t.seconds();
    line(12, "gluing certificates (toric + conic)", ok && secs < 120.0, secs, detail);
}

} // namespace

int main() {
    std::printf("acceptance criteria\n");
    criterion_curve();
    criterion_volume_identity();
    criterion_cardinality();
    criterion_semigroup();
    criterion_special_flag();
    criterion_slice_translate();
    criterion_seshadri();
    criterion_separating_weight();
    criterion_moment_suite();
    criterion_ellipsoid();
    criterion_degeneration_error();
    criterion_gluing();
    std::printf("%s (%d failure%s)\n", failures ? "FAILED" : "ALL PASS", failures,
                failures == 1 ? "" : "s");
    return failures;
}
