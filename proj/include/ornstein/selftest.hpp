#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ornstein/certificate.hpp"
#include "ornstein/experiments.hpp"
#include "ornstein/norm_estimate.hpp"
#include "ornstein/pipeline.hpp"
#include "ornstein/witness.hpp"

namespace ornstein::selftest {

// The canonical 2-d system: pure second derivatives controlling the mixed one.
inline DerivativeSystem mixed_derivative_system() {
    DerivativeSystem sys;
    sys.d = 2;
    sys.alphas = {MultiIndex{2, 0}, MultiIndex{0, 2}};
    sys.beta = MultiIndex{1, 1};
    return validated(sys);
}

inline WitnessFamily t2_family(int n, Mode mode = Mode::Native, int base_m = 0) {
    const auto sys = mixed_derivative_system();
    WitnessParams p;
    p.sys = sys;
    p.cert = certify(sys);
    p.n = n;
    p.variant = Variant::T2;
    p.mode = mode;
    p.base_m = base_m;
    return WitnessFamily::build(p);
}

struct Check {
    std::string name;
    std::function<std::string()> run;  // empty string = pass, otherwise failure detail
};

inline std::vector<Check> checks() {
    std::vector<Check> out;

    out.push_back({"riesz identity D^{alpha_1} W == R", [] {
        const auto fam = t2_family(3);
        const auto w = fam.w_poly();
        const auto r = fam.riesz();
        if (differentiate(w, fam.alpha1()) != r) return std::string("coefficient maps differ");
        std::vector<TrigPoly> factors;
        for (const auto& ak : fam.a()) factors.push_back(TrigPoly::cosine(2, ak) +
                                                         TrigPoly::constant(2, {Rat(1), Rat(0)}));
        auto expanded = product_expand(2, factors);
        expanded -= TrigPoly::constant(2, {Rat(1), Rat(0)});
        if (expanded != r) return std::string("product expansion disagrees with level sets");
        return std::string{};
    }});

    out.push_back({"decomposition B + G == D^mu W", [] {
        const auto fam = t2_family(3);
        const auto w = fam.w_poly();
        for (const MultiIndex& mu : {fam.system().beta, fam.system().alphas[1]}) {
            const auto [b, g] = fam.bg_polys(mu);
            if (b + g != differentiate(w, mu)) return std::string("mismatch for some mu");
        }
        return std::string{};
    }});

    out.push_back({"level set sizes and unique representations", [] {
        const auto fam = t2_family(4);
        const auto& inv = fam.invariants();
        if (!inv.counts_ok) return std::string("|A_k| != 3^{k-1}");
        if (!inv.unique_representations) return std::string("signed combinations collide");
        return std::string{};
    }});

    out.push_back({"comparability tau <= 2 and growth condition", [] {
        const auto fam = t2_family(4);
        const auto& inv = fam.invariants();
        if (!inv.growth_ok) return std::string("growth condition violated");
        if (!inv.comparability_ok) return std::string("tau exceeds 2");
        return std::string{};
    }});

    out.push_back({"MC norm of |cos| matches 2/pi", [] {
        const auto f = CompiledTrigPoly(TrigPoly::cosine(2, Frequency{Int(3), Int(1)}));
        const auto est = mc_norm(f, 2, 200'000, 20240801);
        const double expected = 2.0 / 3.14159265358979323846;
        if (std::abs(est.mean - expected) > 3 * est.stderr_of_mean)
            return "estimate " + std::to_string(est.mean) + " off the analytic value";
        return std::string{};
    }});

    out.push_back({"Riesz prefix products have unit norm", [] {
        const auto fam = t2_family(4);
        const auto est = mc_norm(fam.psi_evaluator(3), 2, 200'000, 7);
        if (std::abs(est.mean - 1.0) > 3 * est.stderr_of_mean)
            return "psi_3 norm " + std::to_string(est.mean) + " not within 3 stderr of 1";
        return std::string{};
    }});

    out.push_back({"MC estimate is thread-count invariant", [] {
        const auto fam = t2_family(3);
        const int saved = thread_limit().load();
        set_thread_limit(1);
        const auto a = mc_norm(fam.riesz_evaluator(), 2, 100'000, 99);
        set_thread_limit(4);
        const auto b = mc_norm(fam.riesz_evaluator(), 2, 100'000, 99);
        set_thread_limit(saved);
        if (a.mean != b.mean || a.stderr_of_mean != b.stderr_of_mean)
            return std::string("results differ across thread counts");
        return std::string{};
    }});

    out.push_back({"grid and MC agree on scaled R_2", [] {
        const auto fam = t2_family(2, Mode::Scaled, 4);
        const auto grid = grid_norm(fam.riesz(), 64);
        const auto mc = mc_norm(fam.riesz_evaluator(), 2, 200'000, 11);
        const double tol = std::max(1e-2, 3 * mc.stderr_of_mean);
        if (std::abs(grid.mean - mc.mean) > tol)
            return "grid " + std::to_string(grid.mean) + " vs mc " + std::to_string(mc.mean);
        return std::string{};
    }});

    out.push_back({"W is real-valued with a stable dump", [] {
        const auto fam1 = t2_family(3);
        const auto fam2 = t2_family(3);
        const auto w1 = fam1.w_poly();
        if (!w1.is_real()) return std::string("W fails conjugate symmetry");
        if (w1.dump() != fam2.w_poly().dump()) return std::string("dump not reproducible");
        return std::string{};
    }});

    out.push_back({"T2 power identities of the sequence", [] {
        const auto fam = t2_family(4);
        const auto r2 = fam.level_ratios(fam.system().alphas[1]);
        for (const auto& r : r2)
            if (r != 1) return std::string("a_k^{alpha_2} != a_k^{alpha_1}");
        const auto rb = fam.level_ratios(fam.system().beta);
        for (std::size_t k = 0; k < rb.size(); ++k)
            if (rb[k] != ((k + 1) % 2 == 0 ? 1 : -1))
                return std::string("a_k^beta != (-1)^k a_k^{alpha_1}");
        return std::string{};
    }});

    out.push_back({"frozen triangle norm of B_{beta,2}", [] {
        const auto fam = t2_family(2);
        const auto [b, g] = fam.bg_polys(fam.system().beta);
        if (triangle_norm(b).bound() != Rat(81, 3280))
            return std::string("exact regression value changed");
        return std::string{};
    }});

    return out;
}

// Runs every check, one pass/fail line each; returns the failure count.
inline int run_all(std::ostream& os) {
    int failures = 0;
    for (const auto& c : checks()) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            os << "[PASS] " << c.name << '\n';
        } else {
            os << "[FAIL] " << c.name << ": " << detail << '\n';
            ++failures;
        }
    }
    return failures;
}

}  // namespace ornstein::selftest
