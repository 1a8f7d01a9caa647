#include <catch2/catch.hpp>

#include <complex>
#include <random>

#include "oklab/degeneration.hpp"

using namespace oklab;

namespace {

PolySection mono(std::initializer_list<int> e, Rat c = Rat(1)) {
    return PolySection::monomial(Exponent(std::vector<int>(e)), std::move(c));
}

LeadingSet conic_basis(int k) {
    auto spec = ModelSpec::projective_space(2, 2);
    CoordinateChange cc;
    cc.forward = {mono({0, 1}), mono({1, 0}) + mono({0, 2})};
    cc.inverse = {mono({0, 1}) - mono({2, 0}), mono({1, 0})};
    spec.chart = cc;
    return eliminate(OrderSpec::lex(), model_sections(spec, k));
}

LeadingSet toric_square(int k = 1) {
    return eliminate(OrderSpec::lex(),
                     model_sections(ModelSpec::toric({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), k));
}

} // namespace

TEST_CASE("rescaling a monomial basis is exact at every tau", "[degeneration]") {
    const LeadingSet L = toric_square();
    const auto gamma = separating_weight(L.order, L.exponents);
    for (const Rat& tau : {Rat(1, 2), Rat(1, 7), Rat(9, 10)}) {
        const DegenerationRun run(L, gamma, tau);
        const auto rs = rescale_basis(run);
        for (std::size_t i = 0; i < rs.size(); ++i)
            CHECK(rs[i] == PolySection::monomial(L.exponents[i]));
        CHECK(degeneration_error(run) == 0.0);
    }
}

TEST_CASE("tail powers come from the weight pairing", "[degeneration]") {
    // s = z2 + z1^2 with v = (0,1) and gamma = (4,1): the correction carries
    // tau^((2,0)-(0,1)).(4,1) = tau^7
    LeadingSet single;
    single.level = 1;
    single.order = OrderSpec::lex();
    single.exponents = {Exponent{0, 1}};
    single.distinguished = {mono({0, 1}) + mono({2, 0})};
    const auto sym = rescale_symbolic(single, std::vector<std::int64_t>{4, 1});
    REQUIRE(sym.size() == 1);
    REQUIRE(sym[0].tail.size() == 1);
    CHECK(sym[0].tail[0].tau_pow == 7);
    CHECK(sym[0].tail[0].beta == Exponent{2, 0});

    const DegenerationRun run(single, {4, 1}, Rat(1, 2));
    const auto rs = rescale_basis(run);
    CHECK(rs[0] == mono({0, 1}) + mono({2, 0}, Rat(1, 128)));
}

TEST_CASE("conic flag rescaled corrections all carry positive tau powers", "[degeneration]") {
    for (int k = 1; k <= 2; ++k) {
        const LeadingSet L = conic_basis(k);
        const auto gamma = separating_weight(L.order, L.exponents);
        for (const auto& sec : rescale_symbolic(L, gamma)) {
            for (const auto& t : sec.tail) CHECK(t.tau_pow >= 1);
        }
    }
}

TEST_CASE("error bound dominates sampled deviations", "[degeneration]") {
    const LeadingSet L = conic_basis(1);
    const auto gamma = separating_weight(L.order, L.exponents);
    const DegenerationRun run(L, gamma, Rat(1, 4));
    const double bound = degeneration_error(run);
    const auto rs = rescale_basis(run);

    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> mod(0.0, 1.0), ph(0.0, 6.283185307179586);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<std::complex<double>> z{std::polar(mod(rng), ph(rng)),
                                            std::polar(mod(rng), ph(rng))};
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const auto lead = PolySection::monomial(L.exponents[i]);
            worst = std::max(worst, std::abs(rs[i].eval(z) - lead.eval(z)));
        }
    }
    CHECK(worst <= bound + 1e-12);
    CHECK(bound > 0.0);
}

TEST_CASE("error decays linearly in tau with the audited constant", "[degeneration]") {
    const LeadingSet L = conic_basis(1);
    const auto gamma = separating_weight(L.order, L.exponents);
    const double C = degeneration_error_constant(L, gamma);
    double prev = 1e300;
    for (int j = 1; j <= 10; ++j) {
        const DegenerationRun run(L, gamma, Rat(1, 1 << j));
        const double err = degeneration_error(run);
        CHECK(err <= C * to_double(run.tau) + 1e-15);
        CHECK(err <= prev);
        prev = err;
    }
}

TEST_CASE("degeneration run validation", "[degeneration]") {
    const LeadingSet L = conic_basis(1);
    const auto gamma = separating_weight(L.order, L.exponents);
    CHECK_THROWS_AS(DegenerationRun(L, gamma, Rat(2)), InputError);
    CHECK_THROWS_AS(DegenerationRun(L, gamma, Rat(0)), InputError);
    // a weight that fails to separate is rejected with a certificate
    CHECK_THROWS_AS(DegenerationRun(L, std::vector<std::int64_t>{1, 1}, Rat(1, 2)), InputError);
}

TEST_CASE("toric gluing certificate is trivial", "[degeneration]") {
    const LeadingSet L = toric_square();
    const auto gamma = separating_weight(L.order, L.exponents);
    const Box U = Box::of({-1.0, -1.0}, {1.0, 1.0});
    const Box K = Box::of({-2.0, -2.0}, {2.0, 2.0});
    const auto cert = gluing_certificate(L, gamma, U, K, 1e-2, 16);
    REQUIRE(cert.success);
    // both potentials coincide, so the margins sit exactly at delta
    CHECK(cert.min_margin_inner == Approx(cert.delta).margin(1e-12));
    CHECK(cert.min_margin_collar == Approx(cert.delta).margin(1e-12));
    CHECK(cert.psd_floor_phi > 0);
    CHECK(cert.psd_floor_glued > 0);
    CHECK(cert.pointwise_equalities);
    CHECK(cert.grid_stable);

    const auto again = gluing_certificate(L, gamma, U, K, 1e-2, 16);
    CHECK(again.tau == cert.tau);
    CHECK(again.min_margin_inner == cert.min_margin_inner);
    CHECK(again.min_margin_collar == cert.min_margin_collar);
}

TEST_CASE("conic flag certificate", "[degeneration]") {
    const LeadingSet L = conic_basis(1);
    const auto gamma = separating_weight(L.order, L.exponents);
    const auto A = MomentModel::from_leading_set(L);
    const Box U = shrink_box(A, 0.8);
    const Box K = shrink_box(A, 0.95);
    REQUIRE(U.strictly_inside(K));
    const auto cert = gluing_certificate(L, gamma, U, K, 1e-2, 32);
    REQUIRE(cert.success);
    CHECK(cert.min_margin_inner > 0);
    CHECK(cert.min_margin_collar > 0);
    CHECK(cert.psd_floor_phi >= 1e-9);
    CHECK(cert.psd_floor_glued > 0);
    CHECK(cert.pointwise_equalities);
    CHECK(cert.grid_stable);
    CHECK(cert.rescaled_sup_norm <= cert.ball_radius);
    const std::string report = format_certificate(cert);
    CHECK(report.find("CERTIFIED") != std::string::npos);
}

TEST_CASE("certificate preconditions", "[degeneration]") {
    const LeadingSet L = toric_square();
    const auto gamma = separating_weight(L.order, L.exponents);
    // inner box not inside the outer box
    CHECK_THROWS_AS(gluing_certificate(L, gamma, Box::of({-1.0, -1.0}, {3.0, 3.0}),
                                       Box::of({-2.0, -2.0}, {2.0, 2.0}), 1e-2, 8),
                    InputError);
    // an enormous inner box pushes the moment image against the body boundary
    CHECK_THROWS_AS(gluing_certificate(L, gamma, Box::of({-40.0, -40.0}, {40.0, 40.0}),
                                       Box::of({-41.0, -41.0}, {41.0, 41.0}), 1e-2, 8),
                    RegionError);
}

TEST_CASE("certificate reports structured failure when no scale works", "[degeneration]") {
    const LeadingSet L = toric_square();
    const auto gamma = separating_weight(L.order, L.exponents);
    // a reference ball below every admissible rescaled sup-norm
    const auto cert = gluing_certificate(L, gamma, Box::of({-1.0, -1.0}, {1.0, 1.0}),
                                         Box::of({-2.0, -2.0}, {2.0, 2.0}), 1e-2, 8, 1e-12);
    CHECK_FALSE(cert.success);
    CHECK_FALSE(cert.failure_reason.empty());
    const std::string report = format_certificate(cert);
    CHECK(report.find("FAILED") != std::string::npos);
}
