#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ornstein/certificate.hpp"

using namespace ornstein;

namespace {

DerivativeSystem mixed_system() {
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{2, 0}, MultiIndex{0, 2}};
    sys.beta = MultiIndex{1, 1};
    return sys;
}

// independent oracle: enumerate the full box and keep what the exact checker
// accepts (no elimination step involved)
std::vector<std::vector<int>> lambda_bruteforce(const DerivativeSystem& sys, int box) {
    std::vector<std::vector<int>> found;
    std::vector<int> v(static_cast<std::size_t>(sys.d), 1);
    for (;;) {
        if (check_lambda(sys, v)) found.push_back(v);
        std::size_t i = v.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (v[i] < box) {
                ++v[i];
                done = false;
                break;
            }
            v[i] = 1;
        }
        if (done) break;
    }
    return found;
}

}  // namespace

TEST_CASE("find_lambda matches full-box brute force") {
    const auto sys = mixed_system();
    for (int box : {1, 2, 3, 5}) CHECK(find_lambda(sys, box) == lambda_bruteforce(sys, box));

    // a few random systems, including ones with no solutions
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        DerivativeSystem sys2;
        sys2.d = 3;
        sys2.alphas = {MultiIndex{entry(rng), entry(rng), entry(rng)},
                       MultiIndex{entry(rng), entry(rng), entry(rng)}};
        sys2.beta = MultiIndex{entry(rng), entry(rng), entry(rng)};
        if (!validate(sys2).empty()) continue;
        CHECK(find_lambda(sys2, 4) == lambda_bruteforce(sys2, 4));
    }
}

TEST_CASE("find_lambda on the mixed system contains (1,1)") {
    const auto ls = find_lambda(mixed_system(), 3);
    REQUIRE_FALSE(ls.empty());
    CHECK(ls.front() == std::vector<int>{1, 1});  // sorted lexicographically
    CHECK(std::find(ls.begin(), ls.end(), std::vector<int>{2, 2}) != ls.end());
}

TEST_CASE("equal pairing can force a zero entry, leaving the box empty") {
    // beta = 2 alpha_1 forces lambda_1 = 2 lambda_1, impossible in N^d
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{1, 0}};
    sys.beta = MultiIndex{2, 0};
    CHECK(find_lambda(sys, 10).empty());
    CHECK(lambda_bruteforce(sys, 10).empty());
}

TEST_CASE("a one-dimensional family of solutions is enumerated completely") {
    // <(1,0),L> = <(0,2),L> means l1 = 2 l2: (2,1), (4,2), (6,3), (8,4)
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{1, 0}};
    sys.beta = MultiIndex{0, 2};
    const auto ls = find_lambda(sys, 8);
    CHECK(ls == lambda_bruteforce(sys, 8));
    CHECK(ls == std::vector<std::vector<int>>{{2, 1}, {4, 2}, {6, 3}, {8, 4}});
}

TEST_CASE("gamma certificates on the mixed system") {
    const auto sys = mixed_system();

    const auto gc21 = check_gamma(sys, {2, 1});
    REQUIRE(gc21.has_value());
    CHECK(gc21->sigma == std::vector<int>{0, 1});  // (2,0) is gamma-maximal
    CHECK(gc21->theta == Rat(1, 2));
    CHECK(gc21->phi == Rat(1, 4));

    const auto gc31 = check_gamma(sys, {3, 1});
    REQUIRE(gc31.has_value());
    CHECK(gc31->phi == Rat(1, 4));

    CHECK_FALSE(check_gamma(sys, {1, 1}).has_value());  // all pairings equal
}

TEST_CASE("phi does not depend on gamma for fixed sigma(1) in d = 2") {
    const auto sys = mixed_system();
    const auto list = find_gamma(sys, {1, 1}, 6);
    REQUIRE_FALSE(list.empty());
    for (const auto& gc : list) {
        INFO("gamma = (" << gc.gamma[0] << "," << gc.gamma[1] << ")");
        CHECK(gc.phi == Rat(1, 4));
        // exact re-check of the accepted chain
        const auto again = check_gamma(sys, gc.gamma);
        REQUIRE(again.has_value());
        CHECK(again->sigma == gc.sigma);
        CHECK(again->theta == gc.theta);
    }
    // ranked deterministically: identity permutation first, then smallest gamma
    CHECK(list.front().sigma == std::vector<int>{0, 1});
    CHECK(list.front().gamma == std::vector<int>{2, 1});
}

TEST_CASE("phi of every accepted gamma lies strictly between 0 and 1/2") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> entry(0, 3);
    int accepted = 0;
    for (int trial = 0; trial < 120; ++trial) {
        DerivativeSystem sys;
        sys.d = 2;
        sys.alphas = {MultiIndex{entry(rng), entry(rng)}, MultiIndex{entry(rng), entry(rng)}};
        sys.beta = MultiIndex{entry(rng), entry(rng)};
        if (!validate(sys).empty()) continue;
        std::vector<int> gamma{1 + entry(rng), 1 + entry(rng)};
        if (const auto gc = check_gamma(sys, gamma)) {
            ++accepted;
            CHECK(gc->phi > 0);
            CHECK(gc->phi < Rat(1, 2));
            CHECK(gc->theta > 0);
        }
    }
    CHECK(accepted > 0);
}

TEST_CASE("find_gamma requires at least two alphas") {
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{2, 0}};
    sys.beta = MultiIndex{0, 2};
    CHECK_THROWS_WITH(find_gamma(sys, {1, 1}, 4),
                      Catch::Matchers::ContainsSubstring("at least two alphas"));
}

TEST_CASE("three alphas: the weak tail of the chain and a nontrivial permutation") {
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{3, 0}, MultiIndex{0, 3}, MultiIndex{2, 1}};
    sys.beta = MultiIndex{1, 2};
    REQUIRE(validate(sys).empty());
    CHECK(find_lambda(sys, 3).front() == std::vector<int>{1, 1});

    // gamma (1,2): pairings 3, 6, 4 for the alphas and 5 for beta,
    // so the chain reads 6 > 5 > 4 >= 3 with sigma = (1, 2, 0)
    const auto gc = check_gamma(sys, {1, 2});
    REQUIRE(gc.has_value());
    CHECK(gc->sigma == std::vector<int>{1, 2, 0});
    CHECK(gc->theta == Rat(1, 2));
    CHECK(gc->phi == Rat(1, 4));

    // all alphas pair oddly against any qualifying eps candidate, but so does
    // beta, so the parity split never appears
    CHECK(find_eps(sys).empty());
    const auto cert = certify(sys, 4);
    CHECK(cert.t1());
    CHECK_FALSE(cert.t2());
}

TEST_CASE("eps parity search on the mixed system") {
    const auto sys = mixed_system();
    const auto es = find_eps(sys);
    REQUIRE(es.size() == 2);
    CHECK(es[0] == std::vector<int>{1, 0});  // mask order, coordinate 1 least significant
    CHECK(es[1] == std::vector<int>{0, 1});
    CHECK_FALSE(check_eps(sys, {1, 1}));
    CHECK_FALSE(check_eps(sys, {0, 0}));  // zero vector never qualifies
}

TEST_CASE("zero beta padded system rejects the zero eps") {
    DerivativeSystem sys;
    sys.d = 3;
    sys.alphas = {MultiIndex{2, 0, 0}, MultiIndex{0, 2, 0}};
    sys.beta = MultiIndex{0, 0, 0};
    CHECK_FALSE(check_eps(sys, {0, 0, 0}));
}

TEST_CASE("certify composes the three searches deterministically") {
    const auto cert = certify(mixed_system(), 4);
    CHECK(cert.lambda == std::vector<int>{1, 1});
    REQUIRE(cert.eps.has_value());
    CHECK(*cert.eps == std::vector<int>{1, 0});
    REQUIRE(cert.gamma.has_value());
    CHECK(cert.gamma->gamma == std::vector<int>{2, 1});
    CHECK(cert.gamma->phi == Rat(1, 4));
    CHECK(cert.t1());
    CHECK(cert.t2());
    CHECK(Certificate::t2_exponent() == Rat(1, 2));
    CHECK(cert.theorems() == std::vector<std::string>{"T1", "T2"});
}

TEST_CASE("a system can certify lambda yet support neither theorem") {
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{2, 0}};
    sys.beta = MultiIndex{0, 2};
    const auto cert = certify(sys, 4);
    CHECK(cert.lambda == std::vector<int>{1, 1});
    CHECK_FALSE(cert.t1());  // single alpha, no ordering chain
    CHECK_FALSE(cert.t2());  // brute force over {0,1}^2 finds no parity split
    CHECK(cert.theorems().empty());
}

TEST_CASE("no lambda in the box is a hard error") {
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{1, 0}};
    sys.beta = MultiIndex{2, 0};
    CHECK_THROWS_AS(certify(sys, 8), no_certificate);
}

TEST_CASE("lambda certificates scale") {
    const auto sys = mixed_system();
    for (const auto& l : find_lambda(sys, 3)) {
        std::vector<int> doubled(l);
        for (auto& v : doubled) v *= 2;
        CHECK(check_lambda(sys, doubled));
    }
}

TEST_CASE("certificate JSON uses num/den rationals") {
    const auto cert = certify(mixed_system(), 4);
    const nlohmann::json j = cert;
    CHECK(j.at("lambda") == nlohmann::json::array({1, 1}));
    CHECK(j.at("gamma").at("phi").at("num") == 1);
    CHECK(j.at("gamma").at("phi").at("den") == 4);
    CHECK(j.at("t2_exponent").at("den") == 2);
    const auto back = j.get<Certificate>();
    CHECK(back.lambda == cert.lambda);
    CHECK(back.gamma->phi == cert.gamma->phi);
    CHECK(*back.eps == *cert.eps);
}
