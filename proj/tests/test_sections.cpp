#include <catch2/catch.hpp>

#include <random>
#include <set>

#include "oklab/linalg.hpp"
#include "oklab/sections.hpp"

using namespace oklab;

namespace {

PolySection mono(std::initializer_list<int> e, Rat c = Rat(1)) {
    return PolySection::monomial(Exponent(std::vector<int>(e)), std::move(c));
}

CoordinateChange conic_chart() {
    CoordinateChange cc;
    cc.forward = {mono({0, 1}), mono({1, 0}) + mono({0, 2})};
    cc.inverse = {mono({0, 1}) - mono({2, 0}), mono({1, 0})};
    return cc;
}

/// Independent rank oracle for the leading set: m is a leading exponent of the
/// row space iff restricting the coefficient matrix to columns >= m (in the
/// order) has strictly larger rank than restricting to columns > m.
std::vector<Exponent> leading_set_oracle(const OrderSpec& ord, const SectionSpace& sp) {
    std::set<Exponent> support;
    for (const auto& s : sp.basis)
        for (const auto& [e, c] : s.terms()) support.insert(e);
    std::vector<Exponent> cols(support.begin(), support.end());
    auto rank_above = [&](const Exponent& m, bool strict) {
        std::vector<RatVec> rows;
        for (const auto& s : sp.basis) {
            RatVec row;
            for (const auto& e : cols) {
                const Ordering cmp = compare(ord, e, m);
                const bool keep = strict ? cmp == Ordering::Greater : cmp != Ordering::Less;
                if (keep) row.push_back(s.coeff(e));
            }
            rows.push_back(std::move(row));
        }
        return rat_rank(std::move(rows));
    };
    std::vector<Exponent> lead;
    for (const auto& m : cols)
        if (rank_above(m, false) > rank_above(m, true)) lead.push_back(m);
    std::sort(lead.begin(), lead.end(),
              [&](const Exponent& a, const Exponent& b) { return less(ord, a, b); });
    return lead;
}

} // namespace

TEST_CASE("valuation picks the order-minimal exponent", "[sections]") {
    const auto lex = OrderSpec::lex();
    CHECK(valuation(lex, mono({0, 1}) + mono({2, 0})) == Exponent{0, 1});
    CHECK(valuation(OrderSpec::deglex(), mono({1, 1}) - mono({0, 3})) == Exponent{1, 1});
    CHECK(valuation(lex, mono({1, 1}) - mono({0, 3})) == Exponent{0, 3});
    CHECK_THROWS_AS(valuation(lex, PolySection(2)), InputError);
}

TEST_CASE("products multiply exactly and valuations add", "[sections]") {
    CHECK(mono({1, 0}) * mono({0, 1}) == mono({1, 1}));
    const PolySection one = PolySection::constant(1, 1);
    const PolySection z = mono({1});
    CHECK((one + z) * (one - z) == one - mono({2}));

    const auto lex = OrderSpec::lex();
    const PolySection s = mono({0, 1}) + mono({2, 0});
    const PolySection t = mono({0, 1}) - mono({3, 0});
    CHECK(valuation(lex, s * t) == Exponent{0, 2});
    CHECK(valuation(lex, s * t) == valuation(lex, s) + valuation(lex, t));

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coord(0, 4), cnum(-5, 5);
    auto rand_sec = [&](int n) {
        PolySection p(n);
        for (int t2 = 0; t2 < 3; ++t2) {
            std::vector<int> e(static_cast<std::size_t>(n));
            for (auto& v : e) v = coord(rng);
            int c = cnum(rng);
            if (c == 0) c = 1;
            p.add_term(Exponent(std::move(e)), Rat(c));
        }
        if (p.is_zero()) p.add_term(Exponent::zero(n), 1);
        return p;
    };
    for (const auto& ord : {OrderSpec::lex(), OrderSpec::deglex(), OrderSpec::weighted({3, 2})}) {
        for (int t2 = 0; t2 < 1000; ++t2) {
            const PolySection a = rand_sec(2), b = rand_sec(2);
            CHECK(valuation(ord, a * b) == valuation(ord, a) + valuation(ord, b));
        }
    }
}

TEST_CASE("elimination produces the distinguished basis", "[sections]") {
    const auto lex = OrderSpec::lex();

    SECTION("a monomial basis is already eliminated") {
        const SectionSpace sp = model_sections(ModelSpec::projective_space(2, 2), 1);
        REQUIRE(sp.basis.size() == 6);
        const LeadingSet L = eliminate(lex, sp);
        CHECK(L.exponents.size() == 6);
        for (std::size_t i = 0; i < L.exponents.size(); ++i)
            CHECK(L.distinguished[i] == PolySection::monomial(L.exponents[i]));
    }

    SECTION("mixed basis against the rank oracle") {
        SectionSpace sp;
        sp.dim_ambient = 2;
        sp.level = 1;
        sp.basis = {PolySection::constant(2, 1), mono({1, 0}) + mono({0, 1}),
                    mono({1, 0}) - mono({0, 1})};
        const LeadingSet L = eliminate(lex, sp);
        const auto oracle = leading_set_oracle(lex, sp);
        REQUIRE(L.exponents == oracle);
        CHECK(L.exponents == std::vector<Exponent>{Exponent{0, 0}, Exponent{0, 1}, Exponent{1, 0}});
        // distinguished shape: unit leading coefficient, no other leading
        // exponent in the support
        const std::set<Exponent> A(L.exponents.begin(), L.exponents.end());
        for (std::size_t i = 0; i < L.exponents.size(); ++i) {
            CHECK(L.distinguished[i].coeff(L.exponents[i]) == 1);
            for (const auto& [e, c] : L.distinguished[i].terms())
                if (!(e == L.exponents[i])) CHECK_FALSE(A.count(e));
        }
    }

    SECTION("dependent input names the offending element") {
        SectionSpace sp;
        sp.dim_ambient = 2;
        sp.level = 1;
        sp.basis = {mono({1, 0}), Rat(2) * mono({1, 0}), mono({0, 1})};
        try {
            eliminate(lex, sp);
            FAIL("expected DependentBasisError");
        } catch (const DependentBasisError& e) {
            CHECK(e.index == 1);
        }
    }

    SECTION("re-elimination of the distinguished basis is stable") {
        auto spec = ModelSpec::projective_space(2, 2);
        spec.chart = conic_chart();
        const SectionSpace sp = model_sections(spec, 1);
        const LeadingSet L = eliminate(lex, sp);
        const LeadingSet L2 = eliminate(lex, SectionSpace{2, 1, L.distinguished});
        CHECK(L2.exponents == L.exponents);
        for (std::size_t i = 0; i < L.distinguished.size(); ++i)
            CHECK(L2.distinguished[i] == L.distinguished[i]);
    }
}

TEST_CASE("built-in models", "[sections]") {
    // projective space: all monomials of degree <= kd
    const SectionSpace p22 = model_sections(ModelSpec::projective_space(2, 2), 1);
    CHECK(Int(p22.basis.size()) == binomial(4, 2));
    const SectionSpace p33 = model_sections(ModelSpec::projective_space(3, 2), 2);
    CHECK(Int(p33.basis.size()) == binomial(7, 3));

    // curve: 1, z, ..., z^{kd}
    const SectionSpace c32 = model_sections(ModelSpec::curve(3), 2);
    REQUIRE(c32.basis.size() == 7);
    const LeadingSet Lc = eliminate(OrderSpec::lex(), c32);
    CHECK(Lc.exponents.front() == Exponent{0});
    CHECK(Lc.exponents.back() == Exponent{6});

    // toric unit square at k=2: the 9 lattice points of the doubled square
    const auto square = ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const SectionSpace sq2 = model_sections(square, 2);
    CHECK(sq2.basis.size() == 9);
    int count = 0;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) ++count, (void)b;
    CHECK(static_cast<int>(sq2.basis.size()) == count);

    // the toric chart requires the lex-smallest vertex to be dominated
    CHECK_THROWS_AS(model_sections(ModelSpec::toric({{0, 1}, {1, 0}, {2, 2}}), 1), InputError);

    CHECK_THROWS_AS(model_sections(ModelSpec::curve(2), 0), InputError);
}

TEST_CASE("coordinate changes", "[sections]") {
    const auto lex = OrderSpec::lex();
    const SectionSpace p22 = model_sections(ModelSpec::projective_space(2, 2), 1);

    SECTION("identity chart changes nothing") {
        const SectionSpace same = change_coordinates(p22, CoordinateChange::identity(2));
        for (std::size_t i = 0; i < p22.basis.size(); ++i) CHECK(same.basis[i] == p22.basis[i]);
    }

    SECTION("substitution example") {
        // under z1 = w2, z2 = w1 + w2^2 the section z2 becomes w1 + w2^2
        const auto cc = conic_chart();
        CHECK(mono({0, 1}).substitute(cc.forward) == mono({1, 0}) + mono({0, 2}));
    }

    SECTION("a non-inverse pair is rejected") {
        CoordinateChange bad;
        bad.forward = {mono({0, 1}), mono({1, 0}) + mono({0, 2})};
        bad.inverse = {mono({0, 1}), mono({1, 0})}; // misses the -z1^2 correction
        CHECK_THROWS_AS(change_coordinates(p22, bad), InputError);
    }

    SECTION("conic flag body converges to the expected simplex") {
        auto spec = ModelSpec::projective_space(2, 2);
        spec.chart = conic_chart();
        for (int k = 1; k <= 3; ++k) {
            const LeadingSet L = eliminate(lex, model_sections(spec, k));
            CHECK(Int(L.exponents.size()) == binomial(static_cast<unsigned>(2 * k + 2), 2));
            const RatPolytope body = delta_k(L);
            CHECK(Rat(2) * body.volume() == 4); // = (L^2) for O(2) on P^2
        }
    }
}

TEST_CASE("conic flag body slices to the restricted curve body", "[sections]") {
    // the first flag divisor is the conic itself; sections restricted to it
    // form a degree-4 curve system, so the x1 = 0 slice must be [0, 4]
    auto spec = ModelSpec::projective_space(2, 2);
    spec.chart = conic_chart();
    const RatPolytope body = delta_k(eliminate(OrderSpec::lex(), model_sections(spec, 1)));
    const RatPolytope restricted =
        delta_k(eliminate(OrderSpec::lex(), model_sections(ModelSpec::curve(4), 1)));
    CHECK(slice(body, 0, Rat(0)) == restricted);
    // and the x1 >= r translate scales the fiber degree linearly
    CHECK(shift(body, 0, Rat(1, 2)) == simplex_body(RatVec{Rat(1, 2), Rat(2)}));
}

TEST_CASE("random recombinations match the rank oracle", "[sections]") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> cnum(-4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        SectionSpace sp = model_sections(ModelSpec::projective_space(2, 1 + trial % 2), 1);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(sp.basis.size()) - 1);
        for (int mix = 0; mix < 10; ++mix) {
            const int i = pick(rng), j = pick(rng);
            if (i != j)
                sp.basis[static_cast<std::size_t>(i)] +=
                    Rat(cnum(rng)) * sp.basis[static_cast<std::size_t>(j)];
        }
        for (const auto& ord :
             {OrderSpec::lex(), OrderSpec::deglex(), OrderSpec::weighted({5, 2})}) {
            const LeadingSet L = eliminate(ord, sp);
            CHECK(L.exponents == leading_set_oracle(ord, sp));
        }
    }
}

TEST_CASE("leading sets form a graded semigroup on models", "[sections]") {
    const auto lex = OrderSpec::lex();
    const std::vector<ModelSpec> models{ModelSpec::projective_space(2, 1),
                                        ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}),
                                        ModelSpec::toric({{0, 0}, {2, 0}, {0, 1}, {2, 1}})};
    for (const auto& m : models) {
        std::vector<std::vector<Exponent>> A(5);
        for (int k = 1; k <= 4; ++k) A[static_cast<std::size_t>(k)] = eliminate(lex, model_sections(m, k)).exponents;
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; k + l <= 4; ++l) {
                const std::set<Exponent> S(A[static_cast<std::size_t>(k + l)].begin(),
                                           A[static_cast<std::size_t>(k + l)].end());
                for (const auto& a : A[static_cast<std::size_t>(k)])
                    for (const auto& b : A[static_cast<std::size_t>(l)]) CHECK(S.count(a + b) == 1);
            }
    }
}
