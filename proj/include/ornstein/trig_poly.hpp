#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ornstein/multi_index.hpp"
#include "ornstein/numeric.hpp"

namespace ornstein {

// Signed lattice point q in Z^d; magnitudes are unbounded (native-mode
// frequencies reach 3^{2n^2 + O(n)}).
using Frequency = std::vector<Int>;

// Point on T^d stored as d fractions with common denominator 2^128;
// coordinate j of the angle is 2*pi * u[j] / 2^128. The fixed power-of-two
// denominator makes phase reduction of <q, x> an exact wraparound sum.
struct TorusPoint {
    std::vector<u128> u;

    int dim() const { return static_cast<int>(u.size()); }
    double coordinate(int j) const { return unit_interval(u[static_cast<std::size_t>(j)]); }

    static TorusPoint zero(int d) {
        TorusPoint x;
        x.u.assign(static_cast<std::size_t>(d), 0);
        return x;
    }
    // u_j = floor(frac(f_j) * 2^128); exact for dyadic fractions.
    static TorusPoint from_fractions(const std::vector<Rat>& f) {
        TorusPoint x;
        x.u.reserve(f.size());
        for (const Rat& r : f) {
            const Int num = boost::multiprecision::numerator(r);
            const Int den = boost::multiprecision::denominator(r);
            Int scaled = (num << 128) / den;          // floor for nonnegative
            Int m = scaled % (Int(1) << 128);
            if (m < 0) m += Int(1) << 128;
            x.u.push_back(phase_residue(m));
        }
        return x;
    }
};

inline constexpr std::size_t kDefaultTermCap = 10'000'000;

struct cap_exceeded : std::runtime_error {
    std::size_t cap;
    cap_exceeded(const std::string& what, std::size_t c) : std::runtime_error(what), cap(c) {}
};

// Sparse trigonometric polynomial: finite map frequency -> exact coefficient.
// Terms are kept in lexicographic frequency order, so iteration, equality and
// the dump format are canonical regardless of construction order.
class TrigPoly {
public:
    using TermMap = std::map<Frequency, GaussianRational>;

    explicit TrigPoly(int d) : d_(d) {
        if (d < 1) throw std::invalid_argument("TrigPoly: dimension must be >= 1");
    }

    static TrigPoly constant(int d, GaussianRational c) {
        TrigPoly p(d);
        p.add_term(Frequency(static_cast<std::size_t>(d), Int(0)), std::move(c));
        return p;
    }
    // c * e^{i<q, x>}
    static TrigPoly exponential(int d, Frequency q, GaussianRational c) {
        TrigPoly p(d);
        p.add_term(std::move(q), std::move(c));
        return p;
    }
    // cos<q, x> = (e^{iq} + e^{-iq}) / 2
    static TrigPoly cosine(int d, const Frequency& q) {
        TrigPoly p(d);
        Frequency neg(q.size());
        for (std::size_t j = 0; j < q.size(); ++j) neg[j] = -q[j];
        p.add_term(q, GaussianRational::real(Rat(1, 2)));
        p.add_term(std::move(neg), GaussianRational::real(Rat(1, 2)));
        return p;
    }

    int dim() const { return d_; }
    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    GaussianRational coefficient(const Frequency& q) const {
        const auto it = terms_.find(q);
        return it == terms_.end() ? GaussianRational{} : it->second;
    }

    // Merges into an existing term; zero coefficients are never stored.
    void add_term(Frequency q, GaussianRational c) {
        if (static_cast<int>(q.size()) != d_)
            throw std::invalid_argument("TrigPoly::add_term: frequency dimension mismatch");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(std::move(q), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    TrigPoly& operator+=(const TrigPoly& o) {
        if (o.d_ != d_) throw std::invalid_argument("TrigPoly: dimension mismatch");
        for (const auto& [q, c] : o.terms_) add_term(q, c);
        return *this;
    }
    TrigPoly& operator-=(const TrigPoly& o) {
        if (o.d_ != d_) throw std::invalid_argument("TrigPoly: dimension mismatch");
        for (const auto& [q, c] : o.terms_) add_term(q, -c);
        return *this;
    }
    TrigPoly& operator*=(const GaussianRational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [q, c] : terms_) c *= s;
        return *this;
    }
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    friend bool operator==(const TrigPoly& a, const TrigPoly& b) {
        return a.d_ == b.d_ && a.terms_ == b.terms_;
    }

    // Real-valued iff coeff(-q) == conj(coeff(q)) for every stored q.
    bool is_real() const {
        for (const auto& [q, c] : terms_) {
            Frequency neg(q.size());
            for (std::size_t j = 0; j < q.size(); ++j) neg[j] = -q[j];
            if (coefficient(neg) != c.conjugate()) return false;
        }
        return true;
    }

    // Max over stored frequencies of the max absolute coordinate.
    Int degree() const {
        if (terms_.empty()) throw std::domain_error("degree: undefined for the empty polynomial");
        Int deg = 0;
        for (const auto& [q, c] : terms_)
            for (const Int& x : q) {
                Int a = boost::multiprecision::abs(x);
                if (a > deg) deg = a;
            }
        return deg;
    }

    // Exact phase reduction: theta = (sum_j q_j u_j mod 2^128) / 2^128, one
    // trig pair per term, coefficients converted to double last.
    std::complex<double> eval(const TorusPoint& x) const {
        if (x.dim() != d_) throw std::invalid_argument("TrigPoly::eval: point dimension mismatch");
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [q, c] : terms_) {
            u128 p = 0;
            for (std::size_t j = 0; j < q.size(); ++j) p += phase_residue(q[j]) * x.u[j];
            const double theta = kTwoPi * unit_interval(p);
            acc += c.to_complex() * std::complex<double>{std::cos(theta), std::sin(theta)};
        }
        return acc;
    }

    // One line per term: "q1 ... qd re_num/re_den im_num/im_den", sorted
    // lexicographically by frequency. Canonical for diffing.
    std::string dump() const {
        std::ostringstream os;
        for (const auto& [q, c] : terms_) {
            for (const Int& x : q) os << x << ' ';
            os << boost::multiprecision::numerator(c.re) << '/'
               << boost::multiprecision::denominator(c.re) << ' '
               << boost::multiprecision::numerator(c.im) << '/'
               << boost::multiprecision::denominator(c.im) << '\n';
        }
        return os.str();
    }

private:
    int d_;
    TermMap terms_;
};

// D^mu acting termwise: coefficient at q is multiplied by i^{|mu|} q^mu;
// terms with q^mu = 0 vanish.
inline TrigPoly differentiate(const TrigPoly& p, const MultiIndex& mu) {
    if (mu.dim() != p.dim()) throw std::invalid_argument("differentiate: dimension mismatch");
    TrigPoly out(p.dim());
    const GaussianRational rot = imaginary_power(mu.total_order());
    for (const auto& [q, c] : p.terms()) {
        const Int mono = monomial_power(q, mu.entries());
        if (mono == 0) continue;
        out.add_term(q, c * rot * GaussianRational::real(Rat(mono)));
    }
    return out;
}

// Exact distributive product of all factors. The intermediate term count is
// capped; exceeding it raises cap_exceeded naming the cap.
inline TrigPoly product_expand(int d, const std::vector<TrigPoly>& factors,
                               std::size_t term_cap = kDefaultTermCap) {
    TrigPoly acc = TrigPoly::constant(d, GaussianRational::real(Rat(1)));
    for (const TrigPoly& f : factors) {
        if (f.dim() != d) throw std::invalid_argument("product_expand: dimension mismatch");
        TrigPoly next(d);
        for (const auto& [q1, c1] : acc.terms()) {
            for (const auto& [q2, c2] : f.terms()) {
                Frequency q(q1.size());
                for (std::size_t j = 0; j < q1.size(); ++j) q[j] = q1[j] + q2[j];
                next.add_term(std::move(q), c1 * c2);
                if (next.term_count() > term_cap)
                    throw cap_exceeded("product_expand: term cap of " + std::to_string(term_cap) +
                                           " exceeded",
                                       term_cap);
            }
        }
        acc = std::move(next);
    }
    return acc;
}

// Frequency residues cached once for repeated evaluation over many points.
class CompiledTrigPoly {
public:
    explicit CompiledTrigPoly(const TrigPoly& p) : d_(p.dim()) {
        residues_.reserve(p.term_count() * static_cast<std::size_t>(d_));
        coeffs_.reserve(p.term_count());
        for (const auto& [q, c] : p.terms()) {
            for (const Int& x : q) residues_.push_back(phase_residue(x));
            coeffs_.push_back(c.to_complex());
        }
    }

    int dim() const { return d_; }

    std::complex<double> eval(const TorusPoint& x) const {
        std::complex<double> acc{0.0, 0.0};
        const std::size_t d = static_cast<std::size_t>(d_);
        for (std::size_t t = 0; t < coeffs_.size(); ++t) {
            u128 p = 0;
            for (std::size_t j = 0; j < d; ++j) p += residues_[t * d + j] * x.u[j];
            const double theta = kTwoPi * unit_interval(p);
            acc += coeffs_[t] * std::complex<double>{std::cos(theta), std::sin(theta)};
        }
        return acc;
    }

    std::complex<double> operator()(const TorusPoint& x) const { return eval(x); }

private:
    int d_;
    std::vector<u128> residues_;
    std::vector<std::complex<double>> coeffs_;
};

}  // namespace ornstein
