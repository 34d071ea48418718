#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ornstein/certificate.hpp"
#include "ornstein/norm_estimate.hpp"
#include "ornstein/stats.hpp"
#include "ornstein/witness.hpp"

namespace ornstein {

struct SamplingConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::size_t term_cap = kDefaultTermCap;
};

// One row of a sweep: every estimate needed to witness K_degree >= ratio up
// to the reported statistical error. Self-contained and reproducible from
// (params, seed).
struct CertificateRecord {
    int n = 0;
    Variant variant = Variant::T2;
    Mode mode = Mode::Native;
    Int degree;
    double log_degree = 0.0;
    NormEstimate norm_beta;
    std::vector<NormEstimate> norm_alphas;  // input order
    double ratio = 0.0;
    double ratio_err = 0.0;
    std::uint64_t seed = 0;
};

inline CertificateRecord certify_one(const WitnessParams& params, const SamplingConfig& cfg) {
    const WitnessFamily fam = WitnessFamily::build(params);
    const Int needed = fam.expanded_term_count();
    if (needed > cfg.term_cap)
        throw cap_exceeded("certify_one at n = " + std::to_string(params.n) + ": " +
                               needed.str() + " expanded terms exceed the cap of " +
                               std::to_string(cfg.term_cap),
                           cfg.term_cap);
    CertificateRecord rec;
    rec.n = params.n;
    rec.variant = params.variant;
    rec.mode = params.mode;
    rec.degree = fam.degree();
    rec.log_degree = log_positive(rec.degree);
    rec.seed = cfg.seed;

    rec.norm_beta = mc_norm(fam.derivative_evaluator(params.sys.beta, cfg.term_cap), fam.dim(),
                            cfg.samples, cfg.seed);
    rec.norm_alphas.reserve(params.sys.alphas.size());
    for (std::size_t j = 0; j < params.sys.alphas.size(); ++j) {
        if (static_cast<int>(j) == fam.alpha1_index()) {
            // D^{alpha_1} W_n is the modified Riesz product itself
            rec.norm_alphas.push_back(mc_norm(fam.riesz_evaluator(), fam.dim(), cfg.samples, cfg.seed));
        } else {
            rec.norm_alphas.push_back(mc_norm(
                fam.derivative_evaluator(params.sys.alphas[j], cfg.term_cap), fam.dim(),
                cfg.samples, cfg.seed));
        }
    }

    double den = 0.0, den_var = 0.0;
    for (const auto& e : rec.norm_alphas) {
        den += e.mean;
        den_var += e.stderr_of_mean * e.stderr_of_mean;
    }
    rec.ratio = rec.norm_beta.mean / den;
    const double rel_num = rec.norm_beta.stderr_of_mean / std::max(rec.norm_beta.mean, 1e-300);
    const double rel_den = std::sqrt(den_var) / std::max(den, 1e-300);
    rec.ratio_err = rec.ratio * std::sqrt(rel_num * rel_num + rel_den * rel_den);
    return rec;
}

struct SweepReport {
    DerivativeSystem sys;
    Certificate cert;
    Variant variant = Variant::T2;
    Mode mode = Mode::Native;
    std::vector<CertificateRecord> records;
    LinFit exponent_fit;    // log(ratio) vs log(log(degree)); needs >= 3 records
    LinFit ratio_vs_n_fit;  // T2 native: numerator grows ~ n, denominator stays O(1)
    std::optional<Rat> theoretical_phi;
    std::vector<std::string> warnings;
};

inline SweepReport sweep(const WitnessParams& base, int n_from, int n_to,
                         const SamplingConfig& cfg) {
    if (n_from < 1 || n_to < n_from) throw std::invalid_argument("sweep: bad n range");
    SweepReport rep;
    rep.sys = base.sys;
    rep.cert = base.cert;
    rep.variant = base.variant;
    rep.mode = base.mode;
    if (base.variant == Variant::T1 && base.cert.gamma) rep.theoretical_phi = base.cert.gamma->phi;
    if (base.variant == Variant::T2) rep.theoretical_phi = Certificate::t2_exponent();

    for (int n = n_from; n <= n_to; ++n) {
        WitnessParams p = base;
        p.n = n;
        try {
            rep.records.push_back(certify_one(p, cfg));
        } catch (const cap_exceeded& e) {
            rep.warnings.push_back("n=" + std::to_string(n) + " skipped: " + e.what());
        }
    }

    if (rep.records.size() >= 3) {
        std::vector<double> lx, ly, nx, ry;
        for (const auto& r : rep.records) {
            lx.push_back(std::log(r.log_degree));
            ly.push_back(std::log(r.ratio));
            nx.push_back(static_cast<double>(r.n));
            ry.push_back(r.ratio);
        }
        rep.exponent_fit = linear_fit(lx, ly);
        if (base.variant == Variant::T2 && base.mode == Mode::Native)
            rep.ratio_vs_n_fit = linear_fit(nx, ry);
    }
    return rep;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

// CSV columns: n, variant, mode, degree (decimal string), log_degree,
// norm_beta, norm_beta_err, norm_alpha_1..m, err_1..m, ratio, ratio_err, seed.
inline void write_csv(std::ostream& os, const SweepReport& rep) {
    const std::size_t m = rep.sys.alphas.size();
    os << "n,variant,mode,degree,log_degree,norm_beta,norm_beta_err";
    for (std::size_t j = 1; j <= m; ++j) os << ",norm_alpha_" << j << ",err_" << j;
    os << ",ratio,ratio_err,seed\n";
    for (const auto& r : rep.records) {
        os << r.n << ',' << to_string(r.variant) << ',' << to_string(r.mode) << ',' << r.degree
           << ',' << detail::fmt_double(r.log_degree) << ','
           << detail::fmt_double(r.norm_beta.mean) << ','
           << detail::fmt_double(r.norm_beta.stderr_of_mean);
        for (const auto& e : r.norm_alphas)
            os << ',' << detail::fmt_double(e.mean) << ',' << detail::fmt_double(e.stderr_of_mean);
        os << ',' << detail::fmt_double(r.ratio) << ',' << detail::fmt_double(r.ratio_err) << ','
           << r.seed << '\n';
    }
}

inline void to_json(nlohmann::json& j, const NormEstimate& e) {
    j = nlohmann::json{{"mean", e.mean},
                       {"stderr", e.stderr_of_mean},
                       {"samples", e.samples},
                       {"mode", e.mode},
                       {"seed", e.seed}};
}

inline void to_json(nlohmann::json& j, const LinFit& f) {
    if (!f.available) {
        j = nlohmann::json{{"available", false}};
        return;
    }
    j = nlohmann::json{{"available", true},     {"slope", f.slope},
                       {"intercept", f.intercept}, {"r2", f.r2},
                       {"slope_stderr", f.slope_stderr}, {"points", f.points}};
}

inline void to_json(nlohmann::json& j, const CertificateRecord& r) {
    j = nlohmann::json{{"n", r.n},
                       {"variant", to_string(r.variant)},
                       {"mode", to_string(r.mode)},
                       {"degree", r.degree.str()},
                       {"log_degree", r.log_degree},
                       {"norm_beta", r.norm_beta},
                       {"norm_alphas", r.norm_alphas},
                       {"ratio", r.ratio},
                       {"ratio_err", r.ratio_err},
                       {"seed", r.seed}};
}

inline void to_json(nlohmann::json& j, const SweepReport& rep) {
    j = nlohmann::json{{"system", rep.sys},
                       {"certificate", rep.cert},
                       {"variant", to_string(rep.variant)},
                       {"mode", to_string(rep.mode)},
                       {"records", rep.records},
                       {"exponent_fit", rep.exponent_fit},
                       {"ratio_vs_n_fit", rep.ratio_vs_n_fit},
                       {"warnings", rep.warnings}};
    j["theoretical_phi"] =
        rep.theoretical_phi ? rat_to_json(*rep.theoretical_phi) : nlohmann::json(nullptr);
}

}  // namespace ornstein
