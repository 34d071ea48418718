#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ornstein/certificate.hpp"
#include "ornstein/multi_index.hpp"
#include "ornstein/numeric.hpp"
#include "ornstein/trig_poly.hpp"

namespace ornstein {

enum class Variant { T1, T2 };
enum class Mode { Native, Scaled };

inline std::string to_string(Variant v) { return v == Variant::T1 ? "T1" : "T2"; }
inline std::string to_string(Mode m) { return m == Mode::Native ? "native" : "scaled"; }

inline Variant variant_from_string(const std::string& s) {
    if (s == "T1" || s == "t1") return Variant::T1;
    if (s == "T2" || s == "t2") return Variant::T2;
    throw std::invalid_argument("unknown variant: " + s);
}
inline Mode mode_from_string(const std::string& s) {
    if (s == "native") return Mode::Native;
    if (s == "scaled") return Mode::Scaled;
    throw std::invalid_argument("unknown mode: " + s);
}

inline constexpr int kMaxLevels = 64;

struct construction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WitnessParams {
    DerivativeSystem sys;
    Certificate cert;
    int n = 1;
    Variant variant = Variant::T2;
    Mode mode = Mode::Native;
    int base_m = 0;  // scaled mode replaces 3^{lambda_j 2kn} by base_m^{lambda_j k}
};

inline void to_json(nlohmann::json& j, const WitnessParams& p) {
    j = nlohmann::json{{"system", p.sys},
                       {"certificate", p.cert},
                       {"n", p.n},
                       {"variant", to_string(p.variant)},
                       {"mode", to_string(p.mode)}};
    if (p.mode == Mode::Scaled) j["baseM"] = p.base_m;
}
inline void from_json(const nlohmann::json& j, WitnessParams& p) {
    j.at("system").get_to(p.sys);
    if (j.contains("certificate"))
        p.cert = j.at("certificate").get<Certificate>();
    else
        p.cert = certify(p.sys);
    j.at("n").get_to(p.n);
    p.variant = variant_from_string(j.value("variant", "T2"));
    p.mode = mode_from_string(j.value("mode", "native"));
    p.base_m = j.value("baseM", 0);
}

// b_k = 2 + (-1)^k when |alpha_1| - |beta| is even, all ones otherwise.
inline std::vector<int> build_b(bool even_case, int n) {
    std::vector<int> b(static_cast<std::size_t>(n), 1);
    if (even_case)
        for (int k = 1; k <= n; ++k) b[static_cast<std::size_t>(k - 1)] = (k % 2 == 0) ? 3 : 1;
    return b;
}

namespace detail {

inline int designated_alpha1(const WitnessParams& p) {
    if (p.variant == Variant::T1) {
        if (!p.cert.gamma) throw std::invalid_argument("T1 witness requires a gamma certificate");
        return p.cert.gamma->sigma.front();
    }
    // T2: the parity conditions reference the input's first alpha.
    return 0;
}

inline bool even_order_gap(const WitnessParams& p) {
    const long diff = total_order(p.sys.alphas[static_cast<std::size_t>(designated_alpha1(p))]) -
                      total_order(p.sys.beta);
    return diff % 2 == 0;
}

inline void check_params(const WitnessParams& p) {
    const auto problems = validate(p.sys);
    if (!problems.empty()) throw std::invalid_argument("witness: invalid derivative system");
    if (p.n < 1 || p.n > kMaxLevels) throw std::invalid_argument("witness: level count out of range");
    if (!check_lambda(p.sys, p.cert.lambda))
        throw std::invalid_argument("witness: lambda fails the equal-pairing condition");
    if (p.variant == Variant::T1 && !p.cert.gamma)
        throw std::invalid_argument("T1 witness requires a gamma certificate");
    if (p.variant == Variant::T2 && !p.cert.eps)
        throw std::invalid_argument("T2 witness requires an eps certificate");
    if (p.mode == Mode::Scaled && p.base_m < 2)
        throw std::invalid_argument("scaled mode requires base_m >= 2");
}

}  // namespace detail

// The frequency sequence of the construction. T1 native:
//   a_k(j) = 3^{lambda_j 2kn} b_k^{gamma_j} floor(n^{theta gamma_j});
// T2 native: a_k(j) = 3^{lambda_j 2kn} (-1)^{eps_j k}. Scaled mode replaces
// the base factor by base_m^{lambda_j k} so a dense grid oracle is feasible.
inline std::vector<Frequency> build_a(const WitnessParams& p) {
    detail::check_params(p);
    const int d = p.sys.d;
    const int n = p.n;
    const auto& lambda = p.cert.lambda;

    auto base_factor = [&](int k, int j) {
        const auto lj = static_cast<unsigned long>(lambda[static_cast<std::size_t>(j)]);
        if (p.mode == Mode::Native)
            return ipow(Int(3), lj * 2UL * static_cast<unsigned long>(k) *
                                    static_cast<unsigned long>(n));
        return ipow(Int(p.base_m), lj * static_cast<unsigned long>(k));
    };

    std::vector<Frequency> a(static_cast<std::size_t>(n),
                             Frequency(static_cast<std::size_t>(d)));
    if (p.variant == Variant::T1) {
        const auto& gc = *p.cert.gamma;
        const auto b = build_b(detail::even_order_gap(p), n);
        std::vector<Int> floors(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            floors[static_cast<std::size_t>(j)] =
                floor_rational_power(Int(n), gc.theta * gc.gamma[static_cast<std::size_t>(j)]);
        for (int k = 1; k <= n; ++k)
            for (int j = 0; j < d; ++j)
                a[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)] =
                    base_factor(k, j) *
                    ipow(Int(b[static_cast<std::size_t>(k - 1)]),
                         static_cast<unsigned long>(gc.gamma[static_cast<std::size_t>(j)])) *
                    floors[static_cast<std::size_t>(j)];
    } else {
        const auto& eps = *p.cert.eps;
        for (int k = 1; k <= n; ++k)
            for (int j = 0; j < d; ++j) {
                const bool flip = (eps[static_cast<std::size_t>(j)] * k) % 2 != 0;
                Int v = base_factor(k, j);
                if (flip) v = -v;
                a[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)] = std::move(v);
            }
    }
    return a;
}

// One point of A_k with its weight exponent: q = a_k + sum_{j<k} xi_j a_j,
// r = #{j : xi_j != 0} + 1.
struct AkEntry {
    Frequency q;
    int r;
};

// All 3^{k-1} signed combinations, xi_1 varying fastest, each digit running
// -1, 0, 1. k is 1-based.
inline std::vector<AkEntry> enumerate_Ak(const std::vector<Frequency>& a, int k) {
    if (k < 1 || k > static_cast<int>(a.size()))
        throw std::invalid_argument("enumerate_Ak: level out of range");
    const std::size_t d = a.front().size();
    std::vector<AkEntry> out;
    std::vector<int> xi(static_cast<std::size_t>(k - 1), -1);
    for (;;) {
        AkEntry e{a[static_cast<std::size_t>(k - 1)], 1};
        for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(k); ++j) {
            if (xi[j] == 0) continue;
            ++e.r;
            for (std::size_t c = 0; c < d; ++c) e.q[c] += xi[j] * a[j][c];
        }
        out.push_back(std::move(e));
        std::size_t i = 0;
        while (i < xi.size() && xi[i] == 1) xi[i++] = -1;
        if (i == xi.size()) break;
        ++xi[i];
    }
    return out;
}

// Absolute-coefficient sums of a polynomial, kept exact. bound() dominates
// the L1 norm (and every coefficient modulus) from above.
struct TriangleNorm {
    Rat sum_abs_re{0};
    Rat sum_abs_im{0};
    Rat bound() const { return sum_abs_re + sum_abs_im; }
};

inline TriangleNorm triangle_norm(const TrigPoly& p) {
    TriangleNorm t;
    for (const auto& [q, c] : p.terms()) {
        t.sum_abs_re += boost::multiprecision::abs(c.re);
        t.sum_abs_im += boost::multiprecision::abs(c.im);
    }
    return t;
}

// Residues of the level frequencies mod 2^128; phases of every A_k point are
// wraparound sums of these, so evaluation needs O(nd) wide multiplies per
// point regardless of the term count.
class PhaseBasis {
public:
    PhaseBasis() = default;
    PhaseBasis(int d, const std::vector<Frequency>& a)
        : d_(d), n_(static_cast<int>(a.size())) {
        if (n_ > kMaxLevels) throw std::invalid_argument("phase basis: too many levels");
        res_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(d_));
        for (int k = 0; k < n_; ++k)
            for (int j = 0; j < d_; ++j)
                res_[static_cast<std::size_t>(k * d_ + j)] =
                    phase_residue(a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
    }

    int levels() const { return n_; }
    int dim() const { return d_; }

    // All levels paired with one point on T^d.
    void phases(const TorusPoint& x, u128* out) const {
        for (int k = 0; k < n_; ++k) {
            u128 s = 0;
            for (int j = 0; j < d_; ++j)
                s += res_[static_cast<std::size_t>(k * d_ + j)] * x.u[static_cast<std::size_t>(j)];
            out[k] = s;
        }
    }
    // Level k paired with its own block of a point on T^{levels*d}.
    void phases_blocked(const TorusPoint& x, u128* out) const {
        for (int k = 0; k < n_; ++k) {
            u128 s = 0;
            for (int j = 0; j < d_; ++j)
                s += res_[static_cast<std::size_t>(k * d_ + j)] *
                     x.u[static_cast<std::size_t>(k * d_ + j)];
            out[k] = s;
        }
    }

private:
    int d_ = 0;
    int n_ = 0;
    std::vector<u128> res_;
};

// prod_{k<=L} (1 + cos<a_k, x>), optionally minus 1 (the modified Riesz
// product R_n). Nonnegativity of the product is asserted at every point.
class RieszProductEvaluator {
public:
    RieszProductEvaluator(int d, std::vector<Frequency> a, bool subtract_one)
        : basis_(d, a), subtract_one_(subtract_one) {}

    double operator()(const TorusPoint& x) const {
        u128 p[kMaxLevels];
        basis_.phases(x, p);
        double prod = 1.0;
        for (int k = 0; k < basis_.levels(); ++k) {
            const double f = 1.0 + std::cos(kTwoPi * unit_interval(p[k]));
            if (f < 0.0) throw std::logic_error("Riesz factor went negative");
            prod *= f;
        }
        if (prod < 0.0) throw std::logic_error("Riesz product went negative");
        return subtract_one_ ? prod - 1.0 : prod;
    }

private:
    PhaseBasis basis_;
    bool subtract_one_;
};

namespace detail {

// Selector and sign for Re(i^e exp(i theta)) with e = |mu| - |alpha_1|:
// e mod 4 = 0 -> +cos, 1 -> -sin, 2 -> -cos, 3 -> +sin.
struct TrigSelector {
    bool use_sin;
    int sign;
    explicit TrigSelector(long e) {
        const int m = static_cast<int>(((e % 4) + 4) % 4);
        use_sin = (m % 2) != 0;
        sign = (m == 0 || m == 3) ? 1 : -1;
    }
    double apply(double theta) const { return use_sin ? std::sin(theta) : std::cos(theta); }
};

}  // namespace detail

// Structured evaluator of D^mu W_n. Terms at +/-q are folded into one real
// summand 2^{1-r(q)} (q^mu / q^{alpha_1}) Re(i^e e^{i<q,x>}); per-level
// coefficients are stored in the enumerate_Ak odometer order so the phase of
// each term is maintained incrementally from the level phases.
class DerivativeEvaluator {
public:
    DerivativeEvaluator(int d, const std::vector<Frequency>& a, const MultiIndex& alpha1,
                        const MultiIndex& mu, std::size_t term_cap = kDefaultTermCap)
        : basis_(d, a), sel_(mu.total_order() - alpha1.total_order()) {
        const int n = static_cast<int>(a.size());
        level_coeffs_.resize(static_cast<std::size_t>(n));
        std::size_t total = 0;
        for (int k = 1; k <= n; ++k) {
            const auto entries = enumerate_Ak(a, k);
            total += entries.size();
            if (total > term_cap)
                throw cap_exceeded("derivative evaluator at level " + std::to_string(k) +
                                       ": term cap of " + std::to_string(term_cap) + " exceeded",
                                   term_cap);
            auto& cs = level_coeffs_[static_cast<std::size_t>(k - 1)];
            cs.reserve(entries.size());
            for (const auto& e : entries) {
                const Int qa1 = monomial_power(e.q, alpha1.entries());
                if (qa1 == 0)
                    throw construction_error("q^{alpha_1} vanishes at frequency " +
                                             frequency_string(e.q));
                const Int qmu = monomial_power(e.q, mu.entries());
                Rat c = Rat(qmu, qa1) / ipow(Int(2), static_cast<unsigned long>(e.r - 1));
                if (sel_.sign < 0) c = -c;
                cs.push_back(c.convert_to<double>());
            }
        }
    }

    double operator()(const TorusPoint& x) const {
        u128 p[kMaxLevels];
        basis_.phases(x, p);
        double acc = 0.0;
        for (int k = 1; k <= basis_.levels(); ++k) {
            const auto& cs = level_coeffs_[static_cast<std::size_t>(k - 1)];
            u128 cur = p[k - 1];
            for (int j = 0; j + 1 < k; ++j) cur -= p[j];
            std::int8_t digits[kMaxLevels] = {};
            std::fill(digits, digits + (k - 1), static_cast<std::int8_t>(-1));
            std::size_t t = 0;
            for (;;) {
                acc += cs[t] * sel_.apply(kTwoPi * unit_interval(cur));
                if (++t == cs.size()) break;
                int j = 0;
                for (;;) {
                    if (digits[j] < 1) {
                        ++digits[j];
                        cur += p[j];
                        break;
                    }
                    digits[j] = -1;
                    cur -= 2 * p[j];
                    ++j;
                }
            }
        }
        return acc;
    }

private:
    static std::string frequency_string(const Frequency& q) {
        std::ostringstream os;
        os << '(';
        for (std::size_t j = 0; j < q.size(); ++j) os << (j ? "," : "") << q[j];
        os << ')';
        return os.str();
    }

    PhaseBasis basis_;
    detail::TrigSelector sel_;
    std::vector<std::vector<double>> level_coeffs_;
};

// Factored main term: G_{mu,n}(x) = sum_k s_e (a_k^mu / a_k^{alpha_1})
// trig(<a_k, x>) psi_k(x), with psi_k the cumulative Riesz prefix product.
// O(nd) per point.
class GFactoredEvaluator {
public:
    GFactoredEvaluator(int d, const std::vector<Frequency>& a, std::vector<Rat> level_ratios,
                       long order_gap)
        : basis_(d, a), sel_(order_gap) {
        coeffs_.reserve(level_ratios.size());
        for (auto& r : level_ratios) {
            if (sel_.sign < 0) r = -r;
            coeffs_.push_back(r.convert_to<double>());
        }
    }

    double operator()(const TorusPoint& x) const {
        u128 p[kMaxLevels];
        basis_.phases(x, p);
        double acc = 0.0;
        double psi = 1.0;
        for (int k = 0; k < basis_.levels(); ++k) {
            const double theta = kTwoPi * unit_interval(p[k]);
            acc += coeffs_[static_cast<std::size_t>(k)] * sel_.apply(theta) * psi;
            psi *= 1.0 + std::cos(theta);
            if (psi < 0.0) throw std::logic_error("Riesz prefix went negative");
        }
        return acc;
    }

private:
    PhaseBasis basis_;
    detail::TrigSelector sel_;
    std::vector<double> coeffs_;
};

// Which structural invariants the built sequence satisfies. Native-mode
// families are expected to pass all of them; scaled mode trades growth for a
// grid-checkable degree and reports what survives.
struct FamilyInvariants {
    bool counts_ok = false;
    bool unique_representations = false;
    bool growth_ok = false;
    std::vector<std::string> growth_violations;
    bool comparability_ok = false;
    double tau_observed = 0.0;
    bool detail_checked = false;  // uniqueness/tau brute force ran (3^n within budget)
};

class WitnessFamily {
public:
    static WitnessFamily build(WitnessParams params) {
        detail::check_params(params);
        WitnessFamily f;
        f.params_ = std::move(params);
        f.alpha1_index_ = detail::designated_alpha1(f.params_);
        f.even_case_ = detail::even_order_gap(f.params_);
        f.b_ = build_b(f.even_case_, f.params_.n);
        f.a_ = build_a(f.params_);
        f.compute_invariants();
        return f;
    }

    const WitnessParams& params() const { return params_; }
    const DerivativeSystem& system() const { return params_.sys; }
    int levels() const { return params_.n; }
    int dim() const { return params_.sys.d; }
    const std::vector<Frequency>& a() const { return a_; }
    const std::vector<int>& b() const { return b_; }
    bool even_case() const { return even_case_; }
    int alpha1_index() const { return alpha1_index_; }
    const MultiIndex& alpha1() const {
        return params_.sys.alphas[static_cast<std::size_t>(alpha1_index_)];
    }
    const FamilyInvariants& invariants() const { return inv_; }

    std::vector<AkEntry> level_set(int k) const { return enumerate_Ak(a_, k); }

    // Number of terms of the expanded R_n / W_n (= 3^n - 1 without collisions).
    Int expanded_term_count() const {
        return ipow(Int(3), static_cast<unsigned long>(params_.n)) - 1;
    }

    // deg W_n under the max-coordinate convention: the extreme point of the
    // top level A_n realises sum_k |a_k(j)| in each coordinate.
    Int degree() const {
        Int deg = 0;
        for (int j = 0; j < dim(); ++j) {
            Int s = 0;
            for (const auto& ak : a_)
                s += boost::multiprecision::abs(ak[static_cast<std::size_t>(j)]);
            if (s > deg) deg = s;
        }
        return deg;
    }

    // Expanded modified Riesz product: weight 2^{-r(q)} at every q in
    // A_k u -A_k, constant term absent (exactly zero when representations are
    // unique; collisions in scaled mode merge formally).
    TrigPoly riesz(std::size_t term_cap = kDefaultTermCap) const {
        require_cap(term_cap);
        TrigPoly r(dim());
        for_each_signed_entry([&](const Frequency& q, int rexp) {
            r.add_term(q, GaussianRational::real(
                              Rat(1, ipow(Int(2), static_cast<unsigned long>(rexp)))));
        });
        return r;
    }

    RieszProductEvaluator riesz_evaluator() const { return {dim(), a_, true}; }

    // psi_k = prod_{l<k} (1 + cos<a_l, x>); psi_1 is the empty product.
    RieszProductEvaluator psi_evaluator(int k) const {
        if (k < 1 || k > params_.n + 1) throw std::invalid_argument("psi index out of range");
        return {dim(), std::vector<Frequency>(a_.begin(), a_.begin() + (k - 1)), false};
    }

    TrigPoly w_poly(std::size_t term_cap = kDefaultTermCap) const {
        require_cap(term_cap);
        TrigPoly w(dim());
        const GaussianRational rot = imaginary_power(-alpha1().total_order());
        for_each_signed_entry([&](const Frequency& q, int rexp) {
            const Int qa1 = monomial_power(q, alpha1().entries());
            if (qa1 == 0) {
                std::ostringstream os;
                os << "W construction: q^{alpha_1} vanishes at frequency (";
                for (std::size_t j = 0; j < q.size(); ++j) os << (j ? "," : "") << q[j];
                os << ")";
                throw construction_error(os.str());
            }
            w.add_term(q, rot * GaussianRational::real(
                                    Rat(1, qa1 * ipow(Int(2), static_cast<unsigned long>(rexp)))));
        });
        return w;
    }

    // a_k^mu / a_k^{alpha_1} for k = 1..n, exact.
    std::vector<Rat> level_ratios(const MultiIndex& mu) const {
        std::vector<Rat> out;
        out.reserve(a_.size());
        for (const auto& ak : a_)
            out.emplace_back(monomial_power(ak, mu.entries()),
                             monomial_power(ak, alpha1().entries()));
        return out;
    }

    // Exact splitting D^mu W_n = B + G: B carries the coefficient-ratio
    // differences, G the level-constant main term. Any mu with the same
    // Lambda-pairing as alpha_1 is accepted.
    std::pair<TrigPoly, TrigPoly> bg_polys(const MultiIndex& mu,
                                           std::size_t term_cap = kDefaultTermCap) const {
        require_equal_pairing(mu);
        require_cap(term_cap);
        const long e = mu.total_order() - alpha1().total_order();
        const GaussianRational rot = imaginary_power(e);
        const int par = (e % 2 == 0) ? 1 : -1;
        const auto ratios = level_ratios(mu);

        TrigPoly bpoly(dim());
        TrigPoly gpoly(dim());
        for (int k = 1; k <= params_.n; ++k) {
            const Rat& ratio_k = ratios[static_cast<std::size_t>(k - 1)];
            for (const auto& entry : level_set(k)) {
                const Int qa1 = monomial_power(entry.q, alpha1().entries());
                if (qa1 == 0)
                    throw construction_error("B/G construction: q^{alpha_1} vanishes");
                const Rat rho(monomial_power(entry.q, mu.entries()), qa1);
                const Rat w = Rat(1, ipow(Int(2), static_cast<unsigned long>(entry.r)));
                Frequency neg(entry.q.size());
                for (std::size_t j = 0; j < entry.q.size(); ++j) neg[j] = -entry.q[j];

                bpoly.add_term(entry.q, rot * GaussianRational::real((rho - ratio_k) * w));
                bpoly.add_term(neg, rot * GaussianRational::real(Rat(par) * (rho - ratio_k) * w));
                gpoly.add_term(entry.q, rot * GaussianRational::real(ratio_k * w));
                gpoly.add_term(std::move(neg),
                               rot * GaussianRational::real(Rat(par) * ratio_k * w));
            }
        }
        return {std::move(bpoly), std::move(gpoly)};
    }

    DerivativeEvaluator derivative_evaluator(const MultiIndex& mu,
                                             std::size_t term_cap = kDefaultTermCap) const {
        require_equal_pairing(mu);
        return {dim(), a_, alpha1(), mu, term_cap};
    }

    GFactoredEvaluator g_evaluator(const MultiIndex& mu) const {
        require_equal_pairing(mu);
        return {dim(), a_, level_ratios(mu), mu.total_order() - alpha1().total_order()};
    }

private:
    WitnessFamily() = default;

    void require_cap(std::size_t term_cap) const {
        const Int needed = expanded_term_count();
        if (needed > term_cap)
            throw cap_exceeded("witness expansion at n = " + std::to_string(params_.n) +
                                   " needs " + needed.str() + " terms, exceeding the cap of " +
                                   std::to_string(term_cap),
                               term_cap);
    }

    void require_equal_pairing(const MultiIndex& mu) const {
        if (mu.dim() != dim()) throw std::invalid_argument("mu has wrong dimension");
        if (inner(mu, params_.cert.lambda) != inner(alpha1(), params_.cert.lambda))
            throw std::invalid_argument(
                "mu must have the same Lambda-pairing as the designated alpha_1");
    }

    template <class Fn>
    void for_each_signed_entry(Fn&& fn) const {
        for (int k = 1; k <= params_.n; ++k)
            for (const auto& entry : level_set(k)) {
                Frequency neg(entry.q.size());
                for (std::size_t j = 0; j < entry.q.size(); ++j) neg[j] = -entry.q[j];
                fn(entry.q, entry.r);
                fn(neg, entry.r);
            }
    }

    void compute_invariants() {
        const int n = params_.n;
        const int d = dim();
        inv_ = FamilyInvariants{};

        // growth: |a_k(j)| > 3^{2(n-1)} |a_{k-1}(j)|, exact
        inv_.growth_ok = true;
        const Int growth_base = ipow(Int(3), 2UL * static_cast<unsigned long>(n - 1));
        for (int k = 2; k <= n; ++k)
            for (int j = 0; j < d; ++j) {
                const Int cur =
                    boost::multiprecision::abs(a_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]);
                const Int prev =
                    boost::multiprecision::abs(a_[static_cast<std::size_t>(k - 2)][static_cast<std::size_t>(j)]);
                if (!(cur > growth_base * prev)) {
                    inv_.growth_ok = false;
                    std::ostringstream os;
                    os << "k=" << k << " j=" << (j + 1) << ": |a_k(j)|=" << cur
                       << " vs bound " << growth_base * prev;
                    inv_.growth_violations.push_back(os.str());
                }
            }

        // uniqueness via the coordinate gap criterion, exact and cheap
        bool gap_ok = false;
        for (int j = 0; j < d && !gap_ok; ++j) {
            bool ok = true;
            Int partial = 0;
            for (int k = 1; k <= n; ++k) {
                const Int cur = boost::multiprecision::abs(
                    a_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]);
                if (!(cur > 2 * partial)) {
                    ok = false;
                    break;
                }
                partial += cur;
            }
            gap_ok = ok;
        }
        inv_.unique_representations = gap_ok;

        // brute-force detail for small n: set size of all signed combinations,
        // |A_k| counts, observed tau
        const bool feasible = n <= 12;
        inv_.detail_checked = feasible;
        if (feasible) {
            inv_.counts_ok = true;
            Rat tau(1);
            bool comparable = true;
            Int expected = 1;
            for (int k = 1; k <= n; ++k) {
                const auto entries = level_set(k);
                if (Int(entries.size()) != expected) inv_.counts_ok = false;
                expected *= 3;
                for (const auto& entry : entries)
                    for (int j = 0; j < d; ++j) {
                        const Int qj = boost::multiprecision::abs(
                            entry.q[static_cast<std::size_t>(j)]);
                        const Int akj = boost::multiprecision::abs(
                            a_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]);
                        if (qj == 0) {
                            comparable = false;
                            continue;
                        }
                        Rat r1(qj, akj);
                        Rat r2(akj, qj);
                        if (r1 > tau) tau = r1;
                        if (r2 > tau) tau = r2;
                    }
            }
            inv_.comparability_ok = comparable && tau <= 2;
            inv_.tau_observed = comparable ? tau.convert_to<double>()
                                           : std::numeric_limits<double>::infinity();

            if (!gap_ok) {
                std::set<Frequency> all;
                std::vector<int> xi(static_cast<std::size_t>(n), -1);
                for (;;) {
                    Frequency s(static_cast<std::size_t>(d), Int(0));
                    for (int k = 0; k < n; ++k)
                        for (int j = 0; j < d; ++j)
                            s[static_cast<std::size_t>(j)] +=
                                xi[static_cast<std::size_t>(k)] *
                                a_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                    all.insert(std::move(s));
                    std::size_t i = 0;
                    while (i < xi.size() && xi[i] == 1) xi[i++] = -1;
                    if (i == xi.size()) break;
                    ++xi[i];
                }
                inv_.unique_representations =
                    Int(all.size()) == ipow(Int(3), static_cast<unsigned long>(n));
            }
        }
    }

    WitnessParams params_;
    int alpha1_index_ = 0;
    bool even_case_ = false;
    std::vector<int> b_;
    std::vector<Frequency> a_;
    FamilyInvariants inv_;
};

}  // namespace ornstein
