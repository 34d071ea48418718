#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "ornstein/trig_poly.hpp"

namespace ornstein {

// Worker cap for internal parallelism. Results never depend on it:
// accumulation is blocked deterministically below.
inline std::atomic<int>& thread_limit() {
    static std::atomic<int> n{[] {
        const unsigned hw = std::thread::hardware_concurrency();
        return static_cast<int>(hw == 0 ? 1 : (hw > 16 ? 16 : hw));
    }()};
    return n;
}
inline void set_thread_limit(int n) { thread_limit().store(n < 1 ? 1 : n); }

// SplitMix64 used as a counter-based PRF: word(c) depends only on (seed, c),
// so any sample can be generated independently on any thread.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Sample index -> uniform TorusPoint with independent coordinates; each
// coordinate consumes two 64-bit words of the (seed, index) stream.
inline TorusPoint sample_point(std::uint64_t seed, std::uint64_t index, int d) {
    TorusPoint x;
    x.u.resize(static_cast<std::size_t>(d));
    const std::uint64_t base = index * static_cast<std::uint64_t>(2 * d);
    for (int j = 0; j < d; ++j) {
        const std::uint64_t hi = counter_word(seed, base + static_cast<std::uint64_t>(2 * j));
        const std::uint64_t lo = counter_word(seed, base + static_cast<std::uint64_t>(2 * j + 1));
        x.u[static_cast<std::size_t>(j)] = (static_cast<u128>(hi) << 64) | lo;
    }
    return x;
}

struct MeanResult {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t samples = 0;
};

namespace detail {

// Neumaier-compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace detail

// Deterministic parallel mean/stderr of value_of(i) over i in [0, samples).
// Fixed-size blocks are summed in index order and combined in block order, so
// the result is bit-identical for any thread count.
template <class F>
inline MeanResult deterministic_mean(std::uint64_t samples, F&& value_of) {
    if (samples < 1) throw std::invalid_argument("deterministic_mean: needs at least one sample");
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t nblocks = (samples + kBlock - 1) / kBlock;

    std::vector<std::pair<double, double>> partial(static_cast<std::size_t>(nblocks));
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            detail::Kahan s, s2;
            const std::uint64_t lo = b * kBlock;
            const std::uint64_t hi = std::min(samples, lo + kBlock);
            for (std::uint64_t i = lo; i < hi; ++i) {
                const double v = value_of(i);
                s.add(v);
                s2.add(v * v);
            }
            partial[static_cast<std::size_t>(b)] = {s.value(), s2.value()};
        }
    };

    const int nthreads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(thread_limit().load()), nblocks));
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    detail::Kahan sum, sumsq;
    for (const auto& [a, b] : partial) {
        sum.add(a);
        sumsq.add(b);
    }
    MeanResult r;
    r.samples = samples;
    const double n = static_cast<double>(samples);
    r.mean = sum.value() / n;
    if (samples > 1) {
        const double var = (sumsq.value() - n * r.mean * r.mean) / (n - 1.0);
        r.stderr_of_mean = var > 0.0 ? std::sqrt(var / n) : 0.0;
    }
    return r;
}

}  // namespace ornstein
