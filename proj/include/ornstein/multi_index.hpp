#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ornstein/numeric.hpp"

namespace ornstein {

// Exponent vector of a monomial partial derivative D^mu. Entries are orders
// of differentiation per coordinate; by contract they stay below 2^31 and all
// pairings are taken with exact integers.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
        for (int v : e_)
            if (v < 0) throw std::invalid_argument("MultiIndex: entries must be nonnegative");
    }
    MultiIndex(std::initializer_list<int> init) : MultiIndex(std::vector<int>(init)) {}

    int dim() const { return static_cast<int>(e_.size()); }
    int operator[](int j) const { return e_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& entries() const { return e_; }

    long total_order() const {
        long s = 0;
        for (int v : e_) s += v;
        return s;
    }

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> e_;
};

inline long total_order(const MultiIndex& mu) { return mu.total_order(); }

// Exact pairing <mu, v>.
inline Int inner(const MultiIndex& mu, const std::vector<int>& v) {
    if (mu.dim() != static_cast<int>(v.size()))
        throw std::invalid_argument("inner: dimension mismatch");
    Int s = 0;
    for (int j = 0; j < mu.dim(); ++j) s += Int(mu[j]) * v[static_cast<std::size_t>(j)];
    return s;
}

// The data of the inequality under study: ||D^beta f|| <= K sum_j ||D^{alpha_j} f||.
struct DerivativeSystem {
    int d = 0;
    std::vector<MultiIndex> alphas;
    MultiIndex beta;
};

// Returns the violated invariants; empty means the system is usable.
inline std::vector<std::string> validate(const DerivativeSystem& sys) {
    std::vector<std::string> out;
    if (sys.d < 1) out.push_back("dimension must be at least 1");
    if (sys.alphas.empty()) out.push_back("at least one alpha is required");
    for (std::size_t j = 0; j < sys.alphas.size(); ++j)
        if (sys.alphas[j].dim() != sys.d)
            out.push_back("alpha_" + std::to_string(j + 1) + " has wrong dimension");
    if (sys.beta.dim() != sys.d) out.push_back("beta has wrong dimension");
    for (const auto& a : sys.alphas)
        if (a == sys.beta) {
            out.push_back("beta occurs among the alphas (inequality is trivial with K = 1)");
            break;
        }
    for (std::size_t i = 0; i < sys.alphas.size(); ++i)
        for (std::size_t j = i + 1; j < sys.alphas.size(); ++j)
            if (sys.alphas[i] == sys.alphas[j]) {
                out.push_back("alphas contain duplicates");
                i = sys.alphas.size();
                break;
            }
    return out;
}

inline DerivativeSystem validated(DerivativeSystem sys) {
    const auto problems = validate(sys);
    if (!problems.empty()) {
        std::ostringstream os;
        os << "invalid derivative system:";
        for (const auto& p : problems) os << " [" << p << "]";
        throw std::invalid_argument(os.str());
    }
    return sys;
}

inline void to_json(nlohmann::json& j, const MultiIndex& mu) { j = mu.entries(); }
inline void from_json(const nlohmann::json& j, MultiIndex& mu) {
    mu = MultiIndex(j.get<std::vector<int>>());
}

inline void to_json(nlohmann::json& j, const DerivativeSystem& sys) {
    j = nlohmann::json{{"d", sys.d}, {"alphas", sys.alphas}, {"beta", sys.beta}};
}
inline void from_json(const nlohmann::json& j, DerivativeSystem& sys) {
    j.at("d").get_to(sys.d);
    j.at("alphas").get_to(sys.alphas);
    j.at("beta").get_to(sys.beta);
}

}  // namespace ornstein
