#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace ornstein {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using u128 = unsigned __int128;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// x^e by binary powering, exact.
inline Int ipow(Int base, unsigned long e) {
    Int r{1};
    while (e != 0) {
        if (e & 1UL) r *= base;
        e >>= 1UL;
        if (e != 0) base *= base;
    }
    return r;
}

// q^mu for a signed lattice point q and exponent vector mu (entries >= 0).
inline Int monomial_power(const std::vector<Int>& q, const std::vector<int>& mu) {
    if (q.size() != mu.size()) throw std::invalid_argument("monomial_power: dimension mismatch");
    Int r{1};
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (mu[j] < 0) throw std::invalid_argument("monomial_power: negative exponent");
        if (mu[j] != 0) r *= ipow(q[j], static_cast<unsigned long>(mu[j]));
    }
    return r;
}

// Largest r >= 0 with r^k <= x. Exact; x >= 0, k >= 1.
inline Int iroot_floor(const Int& x, unsigned long k) {
    if (x < 0) throw std::domain_error("iroot_floor: negative radicand");
    if (k == 0) throw std::domain_error("iroot_floor: zeroth root");
    if (k == 1 || x < 2) return x;
    const unsigned long bits = boost::multiprecision::msb(x) + 1;
    Int r = Int(1) << (bits / k + 1);
    for (;;) {  // Newton step decreases monotonically once above the root
        Int next = ((k - 1) * r + x / ipow(r, k - 1)) / k;
        if (next >= r) break;
        r = next;
    }
    while (ipow(r, k) > x) --r;
    while (ipow(r + 1, k) <= x) ++r;
    return r;
}

// floor(base^e) for rational e = p/q >= 0, computed exactly as floor((base^p)^(1/q)).
// Floating-point powering misrounds near integers; the construction needs the exact floor.
inline Int floor_rational_power(const Int& base, const Rat& e) {
    if (e < 0) throw std::domain_error("floor_rational_power: negative exponent");
    if (base <= 0) throw std::domain_error("floor_rational_power: base must be positive");
    const Int p = boost::multiprecision::numerator(e);
    const Int q = boost::multiprecision::denominator(e);
    return iroot_floor(ipow(base, p.convert_to<unsigned long>()), q.convert_to<unsigned long>());
}

// x mod 2^128, two's-complement wraparound for negative x.
inline u128 phase_residue(const Int& x) {
    Int m = boost::multiprecision::abs(x);
    const auto lo = static_cast<std::uint64_t>(m & 0xFFFFFFFFFFFFFFFFULL);
    const auto hi = static_cast<std::uint64_t>((m >> 64) & 0xFFFFFFFFFFFFFFFFULL);
    u128 r = (static_cast<u128>(hi) << 64) | lo;
    if (x < 0) r = static_cast<u128>(0) - r;
    return r;
}

// p / 2^128 as a double in [0, 1].
inline double unit_interval(u128 p) {
    const auto hi = static_cast<std::uint64_t>(p >> 64);
    const auto lo = static_cast<std::uint64_t>(p);
    return static_cast<double>(hi) * 0x1p-64 + static_cast<double>(lo) * 0x1p-128;
}

// Natural log of a positive big integer; degree-scale values can exceed double range.
inline double log_positive(const Int& x) {
    if (x <= 0) throw std::domain_error("log_positive: argument must be positive");
    const unsigned long bits = boost::multiprecision::msb(x);
    if (bits < 900) return std::log(x.convert_to<double>());
    const unsigned long shift = bits - 64;
    const double top = Int(x >> shift).convert_to<double>();
    return std::log(top) + static_cast<double>(shift) * 0.69314718055994530941723212145818;
}

// Exact complex rational a + b*i. Coefficients stay exact until the final
// conversion to double at evaluation time.
struct GaussianRational {
    Rat re{};
    Rat im{};

    GaussianRational() = default;
    GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    static GaussianRational real(Rat r) { return {std::move(r), Rat(0)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    GaussianRational conjugate() const { return {re, -im}; }
    std::complex<double> to_complex() const {
        return {re.convert_to<double>(), im.convert_to<double>()};
    }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        const Rat nre = re * o.re - im * o.im;
        const Rat nim = re * o.im + im * o.re;
        re = nre;
        im = nim;
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// i^k for any integer k, negative allowed.
inline GaussianRational imaginary_power(long k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {Rat(1), Rat(0)};
        case 1: return {Rat(0), Rat(1)};
        case 2: return {Rat(-1), Rat(0)};
        default: return {Rat(0), Rat(-1)};
    }
}

}  // namespace ornstein
