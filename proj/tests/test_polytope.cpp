#include <catch2/catch.hpp>

#include <random>

#include "oklab/polytope.hpp"
#include "oklab/sections.hpp"

using namespace oklab;

namespace {

RatVec rv(std::initializer_list<int> v) {
    RatVec out;
    for (int x : v) out.push_back(Rat(x));
    return out;
}

/// Independent 2-D area oracle: shoelace over the angularly sorted vertices.
Rat shoelace_area(const RatPolytope& p) {
    REQUIRE(p.ambient_dim() == 2);
    auto verts = p.vertices();
    RatVec c{Rat(0), Rat(0)};
    for (const auto& v : verts) {
        c[0] += v[0];
        c[1] += v[1];
    }
    c[0] /= Rat(static_cast<int>(verts.size()));
    c[1] /= Rat(static_cast<int>(verts.size()));
    std::sort(verts.begin(), verts.end(), [&](const RatVec& a, const RatVec& b) {
        return std::atan2(to_double(a[1] - c[1]), to_double(a[0] - c[0])) <
               std::atan2(to_double(b[1] - c[1]), to_double(b[0] - c[0]));
    });
    Rat twice = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const auto& a = verts[i];
        const auto& b = verts[(i + 1) % verts.size()];
        twice += a[0] * b[1] - b[0] * a[1];
    }
    if (twice < 0) twice = -twice;
    return twice / 2;
}

} // namespace

TEST_CASE("convex hull basics", "[bodies]") {
    SECTION("unit square") {
        const RatPolytope P = convex_hull({rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})});
        CHECK(P.full_dimensional());
        CHECK(P.vertices().size() == 4);
        CHECK(P.facets().size() == 4);
        CHECK(P.volume() == 1);
        CHECK(shoelace_area(P) == P.volume());
    }

    SECTION("interior and duplicate points are dropped") {
        const RatPolytope P = convex_hull({rv({0, 0}), rv({2, 0}), rv({0, 2}), rv({1, 0}),
                                           RatVec{Rat(1, 2), Rat(1, 2)}, rv({0, 0})});
        CHECK(P.vertices().size() == 3);
        CHECK(P.volume() == 2);
        CHECK(shoelace_area(P) == 2);
    }

    SECTION("collinear points give a flagged degenerate polytope") {
        const RatPolytope P = convex_hull({rv({0, 0}), rv({1, 1}), rv({2, 2})});
        CHECK(P.dim() == 1);
        CHECK_FALSE(P.full_dimensional());
        CHECK(P.volume() == 0);
        CHECK(P.vertices().size() == 2);
        CHECK(P.contains(rv({1, 1})));
        CHECK_FALSE(P.contains(rv({1, 2})));
    }

    SECTION("hull is idempotent on its vertices") {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> coord(0, 8), count(2, 14), dims(1, 4);
        for (int t = 0; t < 30; ++t) {
            const int n = dims(rng), m = count(rng);
            std::vector<RatVec> pts;
            for (int i = 0; i < m; ++i) {
                RatVec p;
                for (int j = 0; j < n; ++j) p.push_back(Rat(coord(rng), 1 + coord(rng)));
                pts.push_back(std::move(p));
            }
            const RatPolytope P = convex_hull(pts);
            CHECK(convex_hull(P.vertices()) == P);
        }
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(convex_hull(std::vector<RatVec>{}), InputError);
        CHECK_THROWS_AS(convex_hull({RatVec{Rat(-1), Rat(0)}}), InputError);
        CHECK_THROWS_AS(convex_hull({RatVec(5, Rat(0))}), InputError);
    }
}

TEST_CASE("exact volumes", "[bodies]") {
    // Sigma_(1,1,4): |det diag(1,1,4)| / 3! = 2/3
    const RatPolytope S = simplex_body(RatVec{Rat(1), Rat(1), Rat(4)});
    CHECK(S.volume() == Rat(2, 3));
    Rat det_over_fact = Rat(1 * 1 * 4, 6);
    CHECK(S.volume() == det_over_fact);

    // the k=1 body of O(2) on P^2 is 2 * standard simplex: area 2, 2! * 2 = 4
    const LeadingSet L = eliminate(OrderSpec::lex(),
                                   model_sections(ModelSpec::projective_space(2, 2), 1));
    const RatPolytope D = delta_k(L);
    CHECK(D.vertices() == std::vector<RatVec>{rv({0, 0}), rv({0, 2}), rv({2, 0})});
    CHECK(D.volume() == 2);
    CHECK(shoelace_area(D) == 2);
    CHECK(Rat(2) * D.volume() == 4);
}

TEST_CASE("essential membership", "[bodies]") {
    const RatPolytope S = simplex_body(RatVec{Rat(1), Rat(1)});
    CHECK(essential_membership(S, rv({0, 0})));      // only coordinate facets touch
    CHECK_FALSE(essential_membership(S, RatVec{Rat(1, 2), Rat(1, 2)})); // diagonal facet
    CHECK(essential_membership(S, RatVec{Rat(1, 4), Rat(1, 4)}));
    CHECK_FALSE(essential_membership(S, RatVec{Rat(-1, 4), Rat(1, 4)}));

    const RatPolytope deg = convex_hull({rv({0, 0}), rv({1, 1})});
    CHECK_THROWS_AS(essential_membership(deg, rv({0, 0})), InputError);
}

TEST_CASE("delta_k bodies of models", "[bodies]") {
    const auto lex = OrderSpec::lex();
    // curve(d): the level-k body is exactly [0, d]
    for (int d = 1; d <= 4; ++d)
        for (int k = 1; k <= 3; ++k) {
            const RatPolytope D = delta_k(eliminate(lex, model_sections(ModelSpec::curve(d), k)));
            CHECK(D.vertices() == std::vector<RatVec>{RatVec{Rat(0)}, RatVec{Rat(d)}});
        }
    // scaling cancels: P^2 O(1) at k=2 is the standard simplex again
    const RatPolytope D = delta_k(eliminate(lex, model_sections(ModelSpec::projective_space(2, 1), 2)));
    CHECK(D == simplex_body(RatVec{Rat(1), Rat(1)}));
    // toric: the body is the defining polytope at its flag vertex, at any k
    const auto tri = ModelSpec::toric({{0, 0}, {2, 0}, {0, 3}});
    const RatPolytope expected = convex_hull({rv({0, 0}), rv({2, 0}), rv({0, 3})});
    for (int k = 1; k <= 3; ++k)
        CHECK(delta_k(eliminate(lex, model_sections(tri, k))) == expected);
}

TEST_CASE("slice and shift", "[bodies]") {
    const RatPolytope S = simplex_body(RatVec{Rat(1), Rat(1)});

    const RatPolytope seg = slice(S, 0, Rat(0));
    CHECK(seg.ambient_dim() == 1);
    CHECK(seg.vertices() == std::vector<RatVec>{RatVec{Rat(0)}, RatVec{Rat(1)}});

    const RatPolytope sh = shift(S, 0, Rat(1, 2));
    CHECK(sh == simplex_body(RatVec{Rat(1, 2), Rat(1, 2)}));

    CHECK(slice(S, 0, Rat(5)).is_empty());
    CHECK(shift(S, 0, Rat(5)).is_empty());

    // slicing at a vertex leaves a point
    const RatPolytope pt = slice(S, 0, Rat(1));
    CHECK(pt.dim() == 0);
    CHECK(pt.volume() == 0);

    // 3-D sanity: the x3 = 2 slice of Sigma_(1,1,4) is Sigma_(1/2,1/2)
    const RatPolytope S3 = simplex_body(RatVec{Rat(1), Rat(1), Rat(4)});
    CHECK(slice(S3, 2, Rat(2)) == simplex_body(RatVec{Rat(1, 2), Rat(1, 2)}));

    // translating the square body by a lattice amount matches the body of the
    // translated polytope as a model, even when it degenerates to a segment
    const auto lex = OrderSpec::lex();
    const RatPolytope sq = delta_k(
        eliminate(lex, model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1)));
    const RatPolytope segment_model =
        delta_k(eliminate(lex, model_sections(ModelSpec::toric({{0, 0}, {0, 1}}), 1)));
    CHECK(shift(sq, 0, Rat(1)) == segment_model);
}

TEST_CASE("domain membership and ellipsoids", "[bodies]") {
    const RatPolytope S = simplex_body(RatVec{Rat(1), Rat(1)});
    const std::vector<std::pair<Rat, Rat>> origin{{Rat(0), Rat(0)}, {Rat(0), Rat(0)}};
    CHECK(domain_membership(S, origin));
    // |3/5|^2 + |4i/5|^2 = 1 lands on the diagonal facet
    const std::vector<std::pair<Rat, Rat>> pyth{{Rat(3, 5), Rat(0)}, {Rat(0), Rat(4, 5)}};
    CHECK_FALSE(domain_membership(S, pyth));

    const RatPolytope S114 = simplex_body(RatVec{Rat(1), Rat(1), Rat(4)});
    CHECK(domain_membership_mu(S114, RatVec{Rat(0), Rat(0), Rat(2)}));

    const RatVec a{Rat(1), Rat(1), Rat(4)};
    CHECK(ellipsoid_domain_mu(a, RatVec{Rat(1, 4), Rat(1, 4), Rat(1)}));
    // the ellipsoid is the domain of the simplex body
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> num(0, 8);
    for (int t = 0; t < 200; ++t) {
        const RatVec mu{Rat(num(rng), 8), Rat(num(rng), 8), Rat(num(rng), 2)};
        CHECK(ellipsoid_domain_mu(a, mu) == domain_membership_mu(S114, mu));
    }
}

TEST_CASE("seshadri parameter", "[bodies]") {
    for (int d = 1; d <= 4; ++d) {
        const RatPolytope P = delta_k(eliminate(OrderSpec::deglex(),
                                                model_sections(ModelSpec::projective_space(2, d), 1)));
        CHECK(seshadri_param(P) == d);
    }
    CHECK(seshadri_param(simplex_body(RatVec{Rat(1), Rat(1), Rat(4)})) == 1);
    const RatPolytope square = convex_hull({rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})});
    CHECK(seshadri_param(square) == 1);
    // t * simplex scales exactly
    for (const Rat& t : {Rat(1, 3), Rat(7, 5), Rat(4)})
        CHECK(seshadri_param(simplex_body(RatVec{t, t, t})) == t);
    CHECK_THROWS_AS(simplex_body(RatVec{Rat(1), Rat(0)}), InputError);
    CHECK_THROWS_AS(simplex_body(RatVec{Rat(1), Rat(-2)}), InputError);
    // polytopes missing the origin report zero
    const RatPolytope offset = convex_hull({rv({1, 1}), rv({2, 1}), rv({1, 2})});
    CHECK(seshadri_param(offset) == 0);
}

TEST_CASE("domain membership commutes with level rescaling", "[bodies]") {
    // mu(sqrt(k) z) = k mu(z) exactly, so z lies in the domain of Delta_k iff
    // the rescaled point lies in the domain of Conv(A(kL))
    const auto lex = OrderSpec::lex();
    const auto model = ModelSpec::projective_space(2, 2);
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> num(0, 12), den(7, 13);
    for (int k : {2, 3}) {
        const LeadingSet L = eliminate(lex, model_sections(model, k));
        const RatPolytope dk = delta_k(L);
        std::vector<RatVec> pts;
        for (const auto& e : L.exponents) {
            RatVec p;
            for (int i = 0; i < e.dim(); ++i) p.push_back(Rat(e[i]));
            pts.push_back(std::move(p));
        }
        const RatPolytope level_body = convex_hull(std::move(pts)); // = k * dk
        for (int t = 0; t < 100; ++t) {
            const RatVec mu{Rat(num(rng), den(rng)), Rat(num(rng), den(rng))};
            RatVec scaled{Rat(k) * mu[0], Rat(k) * mu[1]};
            CHECK(essential_membership(dk, mu) == essential_membership(level_body, scaled));
        }
    }
}

TEST_CASE("body approximation chains", "[bodies]") {
    const auto lex = OrderSpec::lex();
    BodyApprox chain;
    for (int k : {1, 2, 4})
        chain.levels.emplace_back(k, delta_k(eliminate(lex, model_sections(ModelSpec::projective_space(2, 2), k))));
    CHECK(chain.inclusions_hold());
}
