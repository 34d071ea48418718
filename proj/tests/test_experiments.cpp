#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ornstein/experiments.hpp"

using namespace ornstein;

namespace {

DerivativeSystem mixed_system() {
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{2, 0}, MultiIndex{0, 2}};
    sys.beta = MultiIndex{1, 1};
    return sys;
}

std::vector<Frequency> t2_sequence(int n) {
    WitnessParams p;
    p.sys = mixed_system();
    p.cert = certify(p.sys);
    p.n = n;
    p.variant = Variant::T2;
    return build_a(p);
}

std::vector<Frequency> slow_sequence(int n) {
    std::vector<Frequency> a;
    for (int k = 1; k <= n; ++k) a.push_back(Frequency{ipow(Int(2), k), Int(0)});
    return a;
}

}  // namespace

TEST_CASE("latala ratio is 1 by convention when all coefficients vanish") {
    const auto rep = latala_check(2, t2_sequence(3), {0.0, 0.0, 0.0}, 1000, 1);
    CHECK(rep.statistic == 1.0);
    CHECK(rep.stderr_of_stat == 0.0);
    CHECK(rep.pass);
}

TEST_CASE("a single coefficient rides on the empty product") {
    // psi_1 == 1, so ||c psi_1|| = |c| exactly
    const auto rep = latala_check(2, t2_sequence(3), {-2.5}, 1000, 1);
    CHECK(rep.statistic == 1.0);
    CHECK(rep.stderr_of_stat == 0.0);
    CHECK(rep.pass);
}

TEST_CASE("alternating coefficients stay bounded below across n") {
    for (int n = 2; n <= 5; ++n) {
        const auto a = t2_sequence(n);
        std::vector<double> coeffs(static_cast<std::size_t>(n + 1));
        for (int k = 1; k <= n + 1; ++k)
            coeffs[static_cast<std::size_t>(k - 1)] = (k % 2 == 0) ? 1.0 : -1.0;
        const auto rep = latala_check(2, a, coeffs, 100'000, 2024);
        INFO("n = " << n << " ratio " << rep.statistic);
        CHECK(rep.warnings.empty());
        CHECK(rep.statistic >= 0.2);
        CHECK(rep.pass);
    }
}

TEST_CASE("latala ratio is scale invariant") {
    const auto a = t2_sequence(3);
    const std::vector<double> c1{1.0, -1.0, 1.0, -1.0};
    std::vector<double> c2, c3;
    for (double c : c1) {
        c2.push_back(2.0 * c);  // power of two scaling is exact in floating point
        c3.push_back(3.0 * c);
    }
    const auto r1 = latala_check(2, a, c1, 20'000, 5);
    const auto r2 = latala_check(2, a, c2, 20'000, 5);
    const auto r3 = latala_check(2, a, c3, 20'000, 5);
    CHECK(r1.statistic == r2.statistic);
    CHECK_THAT(r3.statistic, Catch::Matchers::WithinRel(r1.statistic, 1e-12));
}

TEST_CASE("growth warnings are attached for slow sequences") {
    const auto rep = latala_check(2, slow_sequence(4), {1.0, 1.0, 1.0, 1.0, 1.0}, 1000, 1);
    CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("meyer transfer is exactly neutral for a single block") {
    const auto a = t2_sequence(1);
    const auto rep = meyer_transfer_check(2, a, modified_riesz_weights(1), 10'000, 3);
    CHECK(rep.statistic == 1.0);  // coupled and decoupled streams coincide at n = 1
    CHECK(rep.pass);
}

TEST_CASE("meyer transfer ratio stays near one for the super-lacunary sequence") {
    for (int n = 2; n <= 4; ++n) {
        const auto rep =
            meyer_transfer_check(2, t2_sequence(n), modified_riesz_weights(n), 50'000, 17);
        INFO("n = " << n << " ratio " << rep.statistic);
        CHECK(rep.warnings.empty());
        CHECK(rep.statistic >= 0.5);
        CHECK(rep.statistic <= 2.0);
    }
}

TEST_CASE("meyer transfer on a slow sequence reports the growth warning") {
    const auto rep =
        meyer_transfer_check(2, slow_sequence(3), modified_riesz_weights(3), 10'000, 17);
    CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("the weight helper encodes combinations little-endian") {
    const auto w = modified_riesz_weights(2);
    REQUIRE(w.size() == 9);
    CHECK(w[4] == 0.0);        // digits (1,1) = all-zero combination
    CHECK(w[3] == 0.5);        // xi = (0,-1): one nonzero
    CHECK(w[0] == 0.25);       // xi = (-1,-1): two nonzero
}

TEST_CASE("single-frequency exponential sums have unit norm") {
    const auto rep = linear_growth_check(2, t2_sequence(3), 1, 3, 20'000, 7);
    const auto& per_n = rep.details.at("per_n");
    CHECK(per_n.at(0).at("norm").get<double>() == 1.0);
    CHECK(per_n.at(0).at("stderr").get<double>() == 0.0);
}

TEST_CASE("exponential-psi sums grow linearly in n") {
    const auto rep = linear_growth_check(2, t2_sequence(6), 2, 6, 50'000, 11);
    INFO("slope " << rep.statistic << " r2 " << rep.details.at("r2").get<double>());
    CHECK(rep.statistic > 0.0);
    CHECK(rep.details.at("r2").get<double>() >= 0.9);
    CHECK(rep.pass);
}

TEST_CASE("the zero fit path yields a zero slope") {
    const auto fit = linear_fit({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
    CHECK(fit.available);
    CHECK(fit.slope == 0.0);
    CHECK(fit.r2 == 1.0);
}

TEST_CASE("reports serialize to the machine-readable schema") {
    const auto rep = latala_check(2, t2_sequence(2), {1.0, -1.0, 1.0}, 5'000, 9);
    const nlohmann::json j = rep;
    CHECK(j.contains("statistic"));
    CHECK(j.contains("samples"));
    CHECK(j.contains("stderr"));
    CHECK(j.contains("threshold"));
    CHECK(j.contains("pass"));
    CHECK(j.at("check") == "latala");
}
