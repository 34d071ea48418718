#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ornstein/norm_estimate.hpp"
#include "ornstein/sampling.hpp"
#include "ornstein/stats.hpp"
#include "ornstein/witness.hpp"

namespace ornstein {

// Strict growth condition |a_k(j)| > 3^{2(n-1)} |a_{k-1}(j)| with n = length
// of the sequence; returns the offending (k, j) pairs.
inline std::vector<std::string> growth_condition_violations(const std::vector<Frequency>& a) {
    std::vector<std::string> out;
    const int n = static_cast<int>(a.size());
    if (n < 2) return out;
    const Int bound = ipow(Int(3), 2UL * static_cast<unsigned long>(n - 1));
    for (int k = 2; k <= n; ++k)
        for (std::size_t j = 0; j < a.front().size(); ++j) {
            const Int cur = boost::multiprecision::abs(a[static_cast<std::size_t>(k - 1)][j]);
            const Int prev = boost::multiprecision::abs(a[static_cast<std::size_t>(k - 2)][j]);
            if (!(cur > bound * prev))
                out.push_back("growth condition fails at k=" + std::to_string(k) +
                              ", j=" + std::to_string(j + 1));
        }
    return out;
}

// sum_k c_k psi_k(x) with psi_k the Riesz prefix product over a_1..a_{k-1}.
class PsiWeightedSumEvaluator {
public:
    PsiWeightedSumEvaluator(int d, const std::vector<Frequency>& a, std::vector<double> coeffs)
        : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("psi sum: needs at least one coefficient");
        if (coeffs_.size() > a.size() + 1)
            throw std::invalid_argument("psi sum: more coefficients than prefix products");
        basis_ = PhaseBasis(
            d, std::vector<Frequency>(a.begin(), a.begin() + (coeffs_.size() - 1)));
    }

    double operator()(const TorusPoint& x) const {
        u128 p[kMaxLevels];
        basis_.phases(x, p);
        double psi = 1.0;
        double acc = coeffs_[0];
        for (int l = 0; l < basis_.levels(); ++l) {
            psi *= 1.0 + std::cos(kTwoPi * unit_interval(p[l]));
            if (psi < 0.0) throw std::logic_error("Riesz prefix went negative");
            acc += coeffs_[static_cast<std::size_t>(l + 1)] * psi;
        }
        return acc;
    }

private:
    PhaseBasis basis_;
    std::vector<double> coeffs_;
};

// sum_{k<=K} e^{i<a_k, x>} psi_k(x).
class ExpPsiSumEvaluator {
public:
    ExpPsiSumEvaluator(int d, const std::vector<Frequency>& a, int K) {
        if (K < 0 || K > static_cast<int>(a.size()))
            throw std::invalid_argument("exp-psi sum: prefix length out of range");
        basis_ = PhaseBasis(d, std::vector<Frequency>(a.begin(), a.begin() + K));
    }

    std::complex<double> operator()(const TorusPoint& x) const {
        u128 p[kMaxLevels];
        basis_.phases(x, p);
        std::complex<double> acc{0.0, 0.0};
        double psi = 1.0;
        for (int k = 0; k < basis_.levels(); ++k) {
            const double theta = kTwoPi * unit_interval(p[k]);
            acc += std::complex<double>{std::cos(theta), std::sin(theta)} * psi;
            psi *= 1.0 + std::cos(theta);
        }
        return acc;
    }

private:
    PhaseBasis basis_;
};

// sum over xi in {-1,0,1}^n of b(xi) exp(i sum_k xi_k <a_k, x>). Weight index
// encodes the digits little-endian: t = sum_k (xi_k + 1) 3^k. The decoupled
// form replaces x by one independent point per level (a point on T^{nd}).
class SignedCombinationSum {
public:
    SignedCombinationSum(int d, const std::vector<Frequency>& a, std::vector<double> weights)
        : basis_(d, a), weights_(std::move(weights)) {
        std::size_t expected = 1;
        for (std::size_t k = 0; k < a.size(); ++k) expected *= 3;
        if (weights_.size() != expected)
            throw std::invalid_argument("signed combination sum: weight count must be 3^n");
    }

    int levels() const { return basis_.levels(); }
    int coupled_dim() const { return basis_.dim(); }
    int decoupled_dim() const { return basis_.dim() * basis_.levels(); }

    std::complex<double> coupled(const TorusPoint& x) const {
        u128 p[kMaxLevels];
        basis_.phases(x, p);
        return eval_from(p);
    }
    std::complex<double> decoupled(const TorusPoint& x) const {
        u128 p[kMaxLevels];
        basis_.phases_blocked(x, p);
        return eval_from(p);
    }

private:
    std::complex<double> eval_from(const u128* p) const {
        const int n = basis_.levels();
        u128 cur = 0;
        for (int k = 0; k < n; ++k) cur -= p[k];
        std::int8_t digits[kMaxLevels] = {};
        std::fill(digits, digits + n, static_cast<std::int8_t>(-1));
        std::complex<double> acc{0.0, 0.0};
        std::size_t t = 0;
        for (;;) {
            if (weights_[t] != 0.0) {
                const double theta = kTwoPi * unit_interval(cur);
                acc += weights_[t] * std::complex<double>{std::cos(theta), std::sin(theta)};
            }
            if (++t == weights_.size()) break;
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
        return acc;
    }

    PhaseBasis basis_;
    std::vector<double> weights_;
};

// Weights of the modified Riesz product: 2^{-#nonzero} per combination, zero
// weight on the all-zero combination.
inline std::vector<double> modified_riesz_weights(int n) {
    std::size_t count = 1;
    for (int k = 0; k < n; ++k) count *= 3;
    std::vector<double> w(count);
    for (std::size_t t = 0; t < count; ++t) {
        std::size_t rem = t;
        int nz = 0;
        for (int k = 0; k < n; ++k) {
            if (rem % 3 != 1) ++nz;
            rem /= 3;
        }
        w[t] = nz == 0 ? 0.0 : std::pow(0.5, nz);
    }
    return w;
}

// Machine-readable result of one empirical check.
struct ExperimentReport {
    std::string check;
    double statistic = 0.0;
    std::uint64_t samples = 0;
    double stderr_of_stat = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::vector<std::string> warnings;
    nlohmann::json details;
};

inline void to_json(nlohmann::json& j, const ExperimentReport& r) {
    j = nlohmann::json{{"check", r.check},       {"statistic", r.statistic},
                       {"samples", r.samples},   {"stderr", r.stderr_of_stat},
                       {"threshold", r.threshold}, {"pass", r.pass},
                       {"warnings", r.warnings}, {"details", r.details}};
}

// ||sum_k c_k psi_k||_1 against sum_k |c_k|; the lower-bound inequality for
// weighted sums of Riesz products predicts a ratio bounded away from zero.
inline ExperimentReport latala_check(int d, const std::vector<Frequency>& a,
                                     const std::vector<double>& coeffs, std::uint64_t samples,
                                     std::uint64_t seed, double threshold = 0.2) {
    ExperimentReport rep;
    rep.check = "latala";
    rep.samples = samples;
    rep.threshold = threshold;
    for (auto& w : growth_condition_violations(a)) rep.warnings.push_back(w);

    double denom = 0.0;
    for (double c : coeffs) denom += std::abs(c);
    if (denom == 0.0) {
        rep.statistic = 1.0;  // both sides vanish; ratio 1 by convention
        rep.pass = rep.statistic >= threshold;
        rep.details = {{"coeff_abs_sum", 0.0}, {"norm_estimate", 0.0}};
        return rep;
    }
    const auto est = mc_norm(PsiWeightedSumEvaluator(d, a, coeffs), d, samples, seed);
    rep.statistic = est.mean / denom;
    rep.stderr_of_stat = est.stderr_of_mean / denom;
    rep.pass = rep.statistic >= threshold;
    rep.details = {{"coeff_abs_sum", denom}, {"norm_estimate", est.mean},
                   {"norm_stderr", est.stderr_of_mean}};
    return rep;
}

// Transference: the L1 norm of a signed-combination sum with coupled phases
// against the decoupled version with one independent phase vector per level.
// Super-lacunary sequences should give a ratio of order one.
inline ExperimentReport meyer_transfer_check(int d, const std::vector<Frequency>& a,
                                             const std::vector<double>& weights,
                                             std::uint64_t samples, std::uint64_t seed,
                                             double band_lo = 0.5, double band_hi = 2.0) {
    ExperimentReport rep;
    rep.check = "meyer_transfer";
    rep.samples = samples;
    rep.threshold = band_hi;
    for (auto& w : growth_condition_violations(a)) rep.warnings.push_back(w);

    const SignedCombinationSum sum(d, a, weights);
    const auto coupled =
        mc_norm([&](const TorusPoint& x) { return sum.coupled(x); }, sum.coupled_dim(), samples,
                seed);
    const auto decoupled =
        mc_norm([&](const TorusPoint& x) { return sum.decoupled(x); }, sum.decoupled_dim(),
                samples, seed);
    rep.statistic = coupled.mean / decoupled.mean;
    const double rel1 = coupled.stderr_of_mean / std::max(coupled.mean, 1e-300);
    const double rel2 = decoupled.stderr_of_mean / std::max(decoupled.mean, 1e-300);
    rep.stderr_of_stat = rep.statistic * std::sqrt(rel1 * rel1 + rel2 * rel2);
    rep.pass = rep.statistic >= band_lo && rep.statistic <= band_hi;
    rep.details = {{"coupled", coupled.mean},
                   {"coupled_stderr", coupled.stderr_of_mean},
                   {"decoupled", decoupled.mean},
                   {"decoupled_stderr", decoupled.stderr_of_mean},
                   {"band", {band_lo, band_hi}}};
    return rep;
}

// s_n = ||sum_{k<=n} e^{i<a_k,x>} psi_k||_1 across a range of n; the cited
// lemma predicts linear growth. Reports the least-squares slope and R^2.
inline ExperimentReport linear_growth_check(int d, const std::vector<Frequency>& a, int n_from,
                                            int n_to, std::uint64_t samples, std::uint64_t seed,
                                            double r2_threshold = 0.9) {
    if (n_from < 0 || n_to < n_from || n_to > static_cast<int>(a.size()))
        throw std::invalid_argument("linear_growth_check: bad n range");
    ExperimentReport rep;
    rep.check = "linear_growth";
    rep.samples = samples;
    rep.threshold = r2_threshold;
    for (auto& w : growth_condition_violations(a)) rep.warnings.push_back(w);

    std::vector<double> xs, ys;
    nlohmann::json per_n = nlohmann::json::array();
    for (int n = n_from; n <= n_to; ++n) {
        double mean = 0.0, err = 0.0;
        if (n == 0) {
            per_n.push_back({{"n", 0}, {"norm", 0.0}, {"stderr", 0.0}});
        } else {
            const auto est = mc_norm(ExpPsiSumEvaluator(d, a, n), d, samples, seed);
            mean = est.mean;
            err = est.stderr_of_mean;
            per_n.push_back({{"n", n}, {"norm", mean}, {"stderr", err}});
        }
        xs.push_back(static_cast<double>(n));
        ys.push_back(mean);
    }
    const LinFit fit = linear_fit(xs, ys);
    rep.statistic = fit.slope;
    rep.stderr_of_stat = fit.slope_stderr;
    rep.pass = fit.available && fit.slope > 0.0 && fit.r2 >= r2_threshold;
    rep.details = {{"per_n", per_n}, {"r2", fit.r2}, {"intercept", fit.intercept}};
    return rep;
}

}  // namespace ornstein
