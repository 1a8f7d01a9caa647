#include <catch2/catch.hpp>

#include <random>
#include <set>

#include "oklab/order.hpp"
#include "oklab/rational.hpp"

using namespace oklab;

TEST_CASE("lex, deglex and weight comparisons", "[order]") {
    const auto lex = OrderSpec::lex();
    CHECK(compare(lex, Exponent{0, 1}, Exponent{1, 0}) == Ordering::Less);
    CHECK(compare(lex, Exponent{1, 0}, Exponent{0, 1}) == Ordering::Greater);
    CHECK(compare(lex, Exponent{2, 3}, Exponent{2, 3}) == Ordering::Equal);

    const auto deglex = OrderSpec::deglex();
    CHECK(compare(deglex, Exponent{0, 1}, Exponent{2, 0}) == Ordering::Less);
    // equal degree falls back to lex
    CHECK(compare(deglex, Exponent{0, 2}, Exponent{1, 1}) == Ordering::Less);

    const auto w = OrderSpec::weighted({4, 1});
    CHECK(compare(w, Exponent{0, 3}, Exponent{1, 0}) == Ordering::Less); // 3 < 4
    // dot-product ties break lexicographically, keeping the order total
    CHECK(compare(OrderSpec::weighted({1, 1}), Exponent{0, 1}, Exponent{1, 0}) == Ordering::Less);

    CHECK_THROWS_AS(compare(lex, Exponent{1}, Exponent{1, 0}), InputError);
    CHECK_THROWS_AS(OrderSpec::weighted({1, 0}), InputError);
}

TEST_CASE("order serialization", "[order]") {
    CHECK(format_order(parse_order("lex")) == "lex");
    CHECK(format_order(parse_order("deglex")) == "deglex");
    CHECK(format_order(parse_order("weight:4,1")) == "weight:4,1");
    CHECK_THROWS_AS(parse_order("grevlex"), InputError);
    CHECK_THROWS_AS(parse_order("weight:4,x"), InputError);
}

TEST_CASE("separating weight follows the doubling construction", "[order]") {
    const std::vector<Exponent> A{Exponent{0, 0}, Exponent{1, 0}, Exponent{0, 1}};
    // C = 1 + max degree = 2, so gamma = ((2C)^1, (2C)^0) = (4, 1)
    CHECK(separating_weight(OrderSpec::lex(), A) == std::vector<std::int64_t>{4, 1});

    // one dimension: any positive weight separates, the construction gives (1)
    const std::vector<Exponent> curve{Exponent{0}, Exponent{1}, Exponent{2}, Exponent{3}};
    CHECK(separating_weight(OrderSpec::lex(), curve) == std::vector<std::int64_t>{1});

    // n = 3 with max degree 2: C = 3, powers of 2C = 6
    const std::vector<Exponent> A3{Exponent{0, 0, 0}, Exponent{1, 1, 0}, Exponent{0, 0, 2}};
    CHECK(separating_weight(OrderSpec::lex(), A3) == std::vector<std::int64_t>{36, 6, 1});

    CHECK_THROWS_AS(separating_weight(OrderSpec::lex(), std::vector<Exponent>{}), InputError);
}

TEST_CASE("verify_separation box check", "[order]") {
    const auto lex = OrderSpec::lex();
    const std::vector<Exponent> A{Exponent{0, 0}, Exponent{1, 0}, Exponent{0, 1}};
    CHECK(verify_separation(lex, A, std::vector<std::int64_t>{4, 1}, 10));

    // (1,0) > (0,1) lexicographically but both dot to 1 against (1,1)
    const std::vector<Exponent> single{Exponent{0, 1}};
    CHECK_FALSE(verify_separation(lex, single, std::vector<std::int64_t>{1, 1}, 2));

    const std::vector<Exponent> origin{Exponent{0}};
    CHECK(verify_separation(lex, origin, std::vector<std::int64_t>{1}, 5));

    CHECK_THROWS_AS(verify_separation(lex, A, std::vector<std::int64_t>{4, 1}, 0), InputError);
}

TEST_CASE("order properties on random data", "[order]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coord(0, 6);
    auto rand_exp = [&](int n) {
        std::vector<int> c(static_cast<std::size_t>(n));
        for (auto& v : c) v = coord(rng);
        return Exponent(std::move(c));
    };
    for (int n = 1; n <= 4; ++n) {
        const std::vector<OrderSpec> orders{OrderSpec::lex(), OrderSpec::deglex(),
                                            OrderSpec::weighted(std::vector<std::int64_t>(
                                                static_cast<std::size_t>(n), 2))};
        for (const auto& ord : orders) {
            for (int t = 0; t < 2500; ++t) {
                const Exponent a = rand_exp(n), b = rand_exp(n), c = rand_exp(n);
                const Ordering ab = compare(ord, a, b);
                // antisymmetry and totality
                if (a == b) {
                    CHECK(ab == Ordering::Equal);
                } else {
                    CHECK(ab != Ordering::Equal);
                    const Ordering ba = compare(ord, b, a);
                    CHECK(((ab == Ordering::Less && ba == Ordering::Greater) ||
                           (ab == Ordering::Greater && ba == Ordering::Less)));
                }
                // compatibility with addition
                CHECK(compare(ord, a + c, b + c) == ab);
            }
        }
    }

    // deglex refines total degree
    for (int t = 0; t < 10000; ++t) {
        const Exponent a = rand_exp(3), b = rand_exp(3);
        if (a.total_degree() < b.total_degree())
            CHECK(compare(OrderSpec::deglex(), a, b) == Ordering::Less);
    }
}

TEST_CASE("separating weight verifies for every base order", "[order]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> nd(1, 4), sz(1, 20), coord(0, 5);
    for (int run = 0; run < 25; ++run) {
        const int n = nd(rng);
        std::set<Exponent> A;
        const int avail = static_cast<int>(binomial(static_cast<unsigned>(5 + n),
                                                    static_cast<unsigned>(n)));
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
        const auto C = separating_degree_bound(Av);
        std::vector<std::int64_t> wv;
        for (int i = 0; i < n; ++i) wv.push_back(i + 2);
        for (const auto& base :
             {OrderSpec::lex(), OrderSpec::deglex(), OrderSpec::weighted(wv)}) {
            const auto gamma = separating_weight(base, Av);
            for (auto g : gamma) CHECK(g > 0);
            CHECK(verify_separation(base, Av, gamma, static_cast<int>(3 * C)));
        }
    }
}
