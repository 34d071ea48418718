#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "ornstein/sampling.hpp"
#include "ornstein/trig_poly.hpp"
#include "ornstein/witness.hpp"

namespace ornstein {

// L1(T^d) norms are taken with respect to the normalized Haar measure, so an
// estimate is just a mean of |f| over uniform points.
struct NormEstimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t samples = 0;
    std::string mode;  // "mc" | "grid"
    std::uint64_t seed = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

}  // namespace detail

// Monte-Carlo estimate of ||f||_1 over T^d. Deterministic in (seed, samples)
// and independent of the worker count.
template <class F>
inline NormEstimate mc_norm(F&& f, int d, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("mc_norm: needs at least two samples");
    const auto r = deterministic_mean(samples, [&](std::uint64_t i) {
        return detail::magnitude(f(sample_point(seed, i, d)));
    });
    return {r.mean, r.stderr_of_mean, samples, "mc", seed};
}

// Signed mean of a real-valued function (diagnostic; e.g. the zero constant
// term of R_n).
template <class F>
inline NormEstimate mc_mean(F&& f, int d, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("mc_mean: needs at least two samples");
    const auto r = deterministic_mean(samples, [&](std::uint64_t i) {
        return static_cast<double>(f(sample_point(seed, i, d)));
    });
    return {r.mean, r.stderr_of_mean, samples, "mc", seed};
}

struct grid_budget_exceeded : std::runtime_error {
    double last_estimate;
    double previous_estimate;
    grid_budget_exceeded(const std::string& what, double last, double prev)
        : std::runtime_error(what), last_estimate(last), previous_estimate(prev) {}
};

namespace detail {

inline double grid_average(const CompiledTrigPoly& f, int d, std::int64_t g) {
    // axis numerators floor(t * 2^128 / g); exact for powers of two, within
    // 2^-128 of the ideal otherwise
    std::vector<u128> axis(static_cast<std::size_t>(g));
    for (std::int64_t t = 0; t < g; ++t) axis[static_cast<std::size_t>(t)] =
        phase_residue((Int(t) << 128) / g);

    TorusPoint x = TorusPoint::zero(d);
    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
    Kahan sum;
    for (;;) {
        sum.add(std::abs(f.eval(x)));
        int j = 0;
        while (j < d) {
            auto& i = idx[static_cast<std::size_t>(j)];
            if (++i < g) {
                x.u[static_cast<std::size_t>(j)] = axis[static_cast<std::size_t>(i)];
                break;
            }
            i = 0;
            x.u[static_cast<std::size_t>(j)] = 0;
            ++j;
        }
        if (j == d) break;
    }
    double total = 1.0;
    for (int j = 0; j < d; ++j) total *= static_cast<double>(g);
    return sum.value() / total;
}

}  // namespace detail

// Dense-grid Riemann average of |f|, refined by doubling the per-axis count
// until the relative change drops below 1e-3. Only feasible for scaled-mode
// polynomials; the caller supplies points_per_axis >= 2*degree + 2.
inline NormEstimate grid_norm(const TrigPoly& f, std::int64_t points_per_axis,
                              std::int64_t max_points_total = std::int64_t(1) << 26) {
    if (points_per_axis < 2) throw std::invalid_argument("grid_norm: needs at least two points per axis");
    const int d = f.dim();
    const CompiledTrigPoly compiled(f);

    auto total_points = [&](std::int64_t g) {
        double t = 1.0;
        for (int j = 0; j < d; ++j) t *= static_cast<double>(g);
        return t;
    };
    if (total_points(points_per_axis) > static_cast<double>(max_points_total))
        throw grid_budget_exceeded("grid_norm: initial grid exceeds the point budget", 0.0, 0.0);

    double prev2 = 0.0;
    double prev = detail::grid_average(compiled, d, points_per_axis);
    bool have_two = false;
    std::int64_t g = points_per_axis;
    for (;;) {
        const std::int64_t g2 = g * 2;
        if (total_points(g2) > static_cast<double>(max_points_total)) {
            std::string what = "grid_norm: point budget reached before convergence; last estimates ";
            what += have_two ? std::to_string(prev2) + ", " + std::to_string(prev)
                             : std::to_string(prev);
            throw grid_budget_exceeded(what, prev, have_two ? prev2 : prev);
        }
        const double cur = detail::grid_average(compiled, d, g2);
        const double delta = std::abs(cur - prev);
        if (delta <= 1e-3 * std::max(std::abs(cur), 1e-12)) {
            NormEstimate est;
            est.mean = cur;
            est.stderr_of_mean = delta;  // final refinement delta
            est.samples = static_cast<std::uint64_t>(total_points(g2));
            est.mode = "grid";
            return est;
        }
        prev2 = prev;
        prev = cur;
        have_two = true;
        g = g2;
    }
}

// The two routes to ||D^mu W_n||: a direct estimate, and the structured pair
// built from the G main term with the exact triangle bound on B.
struct NormBoundsReport {
    NormEstimate direct;   // mc estimate of D^mu W_n
    NormEstimate g_norm;   // mc estimate of G_{mu,n}
    double b_triangle;     // exact upper bound on ||B_{mu,n}||
    double lower_proxy;    // g_norm - b_triangle
    double upper_proxy;    // g_norm + b_triangle
};

inline NormBoundsReport norm_bounds_report(const WitnessFamily& family, const MultiIndex& mu,
                                           std::uint64_t samples, std::uint64_t seed,
                                           std::size_t term_cap = kDefaultTermCap) {
    NormBoundsReport rep;
    rep.direct = mc_norm(family.derivative_evaluator(mu, term_cap), family.dim(), samples, seed);
    rep.g_norm = mc_norm(family.g_evaluator(mu), family.dim(), samples, seed);
    const auto [bpoly, gpoly] = family.bg_polys(mu, term_cap);
    rep.b_triangle = triangle_norm(bpoly).bound().convert_to<double>();
    rep.lower_proxy = rep.g_norm.mean - rep.b_triangle;
    rep.upper_proxy = rep.g_norm.mean + rep.b_triangle;
    return rep;
}

}  // namespace ornstein
