#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ornstein/multi_index.hpp"
#include "ornstein/numeric.hpp"

namespace ornstein {

inline constexpr int kDefaultBoxBound = 8;

// Gamma certificate for the ordered-chain hypothesis: the strict/weak chain
//   <a_{sigma(1)}, G> > <beta, G> > <a_{sigma(2)}, G> >= ... >= <a_{sigma(m)}, G>
// holds for the stored permutation sigma (indices into the input alphas).
struct GammaCertificate {
    std::vector<int> gamma;
    std::vector<int> sigma;
    Rat theta;  // 1 / <a_{sigma(1)} - a_{sigma(2)}, gamma>
    Rat phi;    // (1 - <a_{sigma(1)} - beta, gamma> / <a_{sigma(1)} - a_{sigma(2)}, gamma>) / 2
};

// Why a theorem applies to a system: the equal-pairing vector plus the
// optional ordering and parity sub-certificates it supports.
struct Certificate {
    std::vector<int> lambda;
    std::optional<GammaCertificate> gamma;
    std::optional<std::vector<int>> eps;

    bool t1() const { return gamma.has_value(); }
    bool t2() const { return eps.has_value(); }
    static Rat t2_exponent() { return Rat(1, 2); }
    std::vector<std::string> theorems() const {
        std::vector<std::string> out;
        if (t1()) out.push_back("T1");
        if (t2()) out.push_back("T2");
        return out;
    }
};

struct no_certificate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- exact re-checkers (independent of the search path) ---

inline bool check_lambda(const DerivativeSystem& sys, const std::vector<int>& lambda) {
    if (static_cast<int>(lambda.size()) != sys.d) return false;
    for (int v : lambda)
        if (v < 1) return false;
    const Int target = inner(sys.beta, lambda);
    for (const auto& a : sys.alphas)
        if (inner(a, lambda) != target) return false;
    return true;
}

inline std::optional<GammaCertificate> check_gamma(const DerivativeSystem& sys,
                                                   const std::vector<int>& gamma) {
    const std::size_t m = sys.alphas.size();
    if (m < 2 || static_cast<int>(gamma.size()) != sys.d) return std::nullopt;
    for (int v : gamma)
        if (v < 1) return std::nullopt;

    std::vector<Int> p(m);
    for (std::size_t j = 0; j < m; ++j) p[j] = inner(sys.alphas[j], gamma);
    const Int pb = inner(sys.beta, gamma);

    std::vector<int> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::sort(sigma.begin(), sigma.end(), [&](int i, int j) {
        if (p[static_cast<std::size_t>(i)] != p[static_cast<std::size_t>(j)])
            return p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)];
        return i < j;
    });

    const Int top = p[static_cast<std::size_t>(sigma[0])];
    const Int second = p[static_cast<std::size_t>(sigma[1])];
    if (!(top > pb && pb > second)) return std::nullopt;

    GammaCertificate gc;
    gc.gamma = gamma;
    gc.sigma = std::move(sigma);
    gc.theta = Rat(1, top - second);
    gc.phi = (Rat(1) - Rat(top - pb, top - second)) / 2;
    return gc;
}

inline bool check_eps(const DerivativeSystem& sys, const std::vector<int>& eps) {
    if (static_cast<int>(eps.size()) != sys.d) return false;
    for (int v : eps)
        if (v != 0 && v != 1) return false;
    const Int a1 = inner(sys.alphas.front(), eps);
    if ((inner(sys.beta, eps) - a1) % 2 == 0) return false;
    for (const auto& a : sys.alphas)
        if ((inner(a, eps) - a1) % 2 != 0) return false;
    return true;
}

namespace detail {

// Reduced row echelon form over exact rationals; returns pivot column per row.
inline std::vector<int> rref(std::vector<std::vector<Rat>>& mat, int cols) {
    std::vector<int> pivots;
    std::size_t row = 0;
    for (int col = 0; col < cols && row < mat.size(); ++col) {
        std::size_t sel = row;
        while (sel < mat.size() && mat[sel][static_cast<std::size_t>(col)] == 0) ++sel;
        if (sel == mat.size()) continue;
        std::swap(mat[row], mat[sel]);
        const Rat inv = Rat(1) / mat[row][static_cast<std::size_t>(col)];
        for (auto& v : mat[row]) v *= inv;
        for (std::size_t r = 0; r < mat.size(); ++r) {
            if (r == row) continue;
            const Rat f = mat[r][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int c2 = 0; c2 < cols; ++c2)
                mat[r][static_cast<std::size_t>(c2)] -=
                    f * mat[row][static_cast<std::size_t>(c2)];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

// All lambda in {1..box}^d with all pairings <alpha_j, L> equal to <beta, L>,
// sorted lexicographically. Solves (alpha_j - beta) . L = 0 by exact
// elimination first and enumerates only the free coordinates of the box.
inline std::vector<std::vector<int>> find_lambda(const DerivativeSystem& sys, int box_bound) {
    if (box_bound < 1) throw std::invalid_argument("find_lambda: box bound must be >= 1");
    const int d = sys.d;

    std::vector<std::vector<Rat>> mat;
    for (const auto& a : sys.alphas) {
        std::vector<Rat> row(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = Rat(a[j] - sys.beta[j]);
        mat.push_back(std::move(row));
    }
    const std::vector<int> pivots = detail::rref(mat, d);

    std::vector<int> free_cols;
    {
        std::vector<bool> is_pivot(static_cast<std::size_t>(d), false);
        for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
        for (int c = 0; c < d; ++c)
            if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
    }
    if (free_cols.empty()) return {};  // only the zero solution, excluded by L >= 1

    std::vector<std::vector<int>> found;
    std::vector<int> assign(free_cols.size(), 1);
    for (;;) {
        std::vector<int> lambda(static_cast<std::size_t>(d), 0);
        for (std::size_t f = 0; f < free_cols.size(); ++f)
            lambda[static_cast<std::size_t>(free_cols[f])] = assign[f];
        bool ok = true;
        for (std::size_t r = 0; r < pivots.size() && ok; ++r) {
            Rat v = 0;
            for (std::size_t f = 0; f < free_cols.size(); ++f)
                v -= mat[r][static_cast<std::size_t>(free_cols[f])] * assign[f];
            if (boost::multiprecision::denominator(v) != 1) {
                ok = false;
                break;
            }
            const Int num = boost::multiprecision::numerator(v);
            if (num < 1 || num > box_bound) {
                ok = false;
                break;
            }
            lambda[static_cast<std::size_t>(pivots[r])] = num.convert_to<int>();
        }
        if (ok && check_lambda(sys, lambda)) found.push_back(std::move(lambda));

        std::size_t i = free_cols.size();
        while (i > 0) {
            --i;
            if (assign[i] < box_bound) {
                ++assign[i];
                break;
            }
            assign[i] = 1;
            if (i == 0) {
                std::sort(found.begin(), found.end());
                return found;
            }
        }
        if (free_cols.empty()) break;
    }
    std::sort(found.begin(), found.end());
    return found;
}

// All qualifying gamma in {1..box}^d, ranked by phi descending, then by the
// witnessing permutation, then lexicographically by gamma. The lambda
// argument is validated for context; the chain itself does not involve it.
inline std::vector<GammaCertificate> find_gamma(const DerivativeSystem& sys,
                                                const std::vector<int>& lambda, int box_bound) {
    if (sys.alphas.size() < 2)
        throw std::invalid_argument("Theorem 1 path requires at least two alphas");
    if (!check_lambda(sys, lambda))
        throw std::invalid_argument("find_gamma: lambda does not satisfy the equal-pairing condition");
    if (box_bound < 1) throw std::invalid_argument("find_gamma: box bound must be >= 1");

    std::vector<GammaCertificate> found;
    std::vector<int> gamma(static_cast<std::size_t>(sys.d), 1);
    for (;;) {
        if (auto gc = check_gamma(sys, gamma)) found.push_back(std::move(*gc));
        std::size_t i = gamma.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (gamma[i] < box_bound) {
                ++gamma[i];
                done = false;
                break;
            }
            gamma[i] = 1;
        }
        if (done) break;
    }
    std::sort(found.begin(), found.end(), [](const GammaCertificate& a, const GammaCertificate& b) {
        if (a.phi != b.phi) return a.phi > b.phi;
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        return a.gamma < b.gamma;
    });
    return found;
}

// All eps in {0,1}^d meeting the parity condition, exhaustive over 2^d.
// Ordered by ascending bitmask with coordinate 1 as the least significant
// bit, which is the order "smallest" refers to throughout.
inline std::vector<std::vector<int>> find_eps(const DerivativeSystem& sys) {
    std::vector<std::vector<int>> found;
    const int d = sys.d;
    for (unsigned long mask = 0; mask < (1UL << d); ++mask) {
        std::vector<int> eps(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) eps[static_cast<std::size_t>(j)] = (mask >> j) & 1UL;
        if (check_eps(sys, eps)) found.push_back(std::move(eps));
    }
    return found;
}

// Deterministic composition: smallest lambda, phi-maximizing gamma, smallest
// eps. A system with a lambda but neither sub-certificate yields a
// certificate that supports no theorem; a system with no lambda in the box
// has no certificate at all.
inline Certificate certify(const DerivativeSystem& sys, int box_bound = kDefaultBoxBound) {
    const auto problems = validate(sys);
    if (!problems.empty()) throw std::invalid_argument("certify: invalid system");

    const auto lambdas = find_lambda(sys, box_bound);
    if (lambdas.empty())
        throw no_certificate("anisotropic hypothesis not certified within box bound " +
                             std::to_string(box_bound));
    Certificate cert;
    cert.lambda = lambdas.front();
    if (sys.alphas.size() >= 2) {
        const auto gammas = find_gamma(sys, cert.lambda, box_bound);
        if (!gammas.empty()) cert.gamma = gammas.front();
    }
    const auto epses = find_eps(sys);
    if (!epses.empty()) cert.eps = epses.front();
    return cert;
}

// --- JSON, exact rationals as {"num": int, "den": int} ---

inline nlohmann::json rat_to_json(const Rat& r) {
    return nlohmann::json{
        {"num", boost::multiprecision::numerator(r).convert_to<long long>()},
        {"den", boost::multiprecision::denominator(r).convert_to<long long>()}};
}
inline Rat rat_from_json(const nlohmann::json& j) {
    return Rat(Int(j.at("num").get<long long>()), Int(j.at("den").get<long long>()));
}

inline void to_json(nlohmann::json& j, const GammaCertificate& gc) {
    j = nlohmann::json{{"gamma", gc.gamma},
                       {"sigma", gc.sigma},
                       {"theta", rat_to_json(gc.theta)},
                       {"phi", rat_to_json(gc.phi)}};
}
inline void from_json(const nlohmann::json& j, GammaCertificate& gc) {
    j.at("gamma").get_to(gc.gamma);
    j.at("sigma").get_to(gc.sigma);
    gc.theta = rat_from_json(j.at("theta"));
    gc.phi = rat_from_json(j.at("phi"));
}

inline void to_json(nlohmann::json& j, const Certificate& c) {
    j = nlohmann::json{{"lambda", c.lambda}, {"theorems", c.theorems()}};
    j["gamma"] = c.gamma ? nlohmann::json(*c.gamma) : nlohmann::json(nullptr);
    j["eps"] = c.eps ? nlohmann::json(*c.eps) : nlohmann::json(nullptr);
    if (c.t2()) j["t2_exponent"] = rat_to_json(Certificate::t2_exponent());
}
inline void from_json(const nlohmann::json& j, Certificate& c) {
    j.at("lambda").get_to(c.lambda);
    if (j.contains("gamma") && !j.at("gamma").is_null())
        c.gamma = j.at("gamma").get<GammaCertificate>();
    if (j.contains("eps") && !j.at("eps").is_null())
        c.eps = j.at("eps").get<std::vector<int>>();
}

}  // namespace ornstein
