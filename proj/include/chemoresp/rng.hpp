#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace chemoresp {

// All randomized code draws through these helpers rather than the
// implementation-defined std distributions, so that a given seed produces
// the same stream on every platform/stdlib.
using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

// Independent child seed for stream `stream` of a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return detail::splitmix64(base ^ detail::splitmix64(stream));
}

// Uniform double in [lo, hi) with 53 random bits.
inline double uniform_real(Rng& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

// Uniform integer in [lo, hi], inclusive, via rejection sampling.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng()); // full range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
}

// Standard normal draw, cacheless Box-Muller (two uniforms per call).
inline double normal(Rng& rng) {
    double u1;
    do {
        u1 = uniform_real(rng, 0.0, 1.0);
    } while (u1 <= 0.0);
    const double u2 = uniform_real(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Fisher-Yates with the deterministic uniform_int above.
template <class T>
inline void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1));
        std::swap(v[i - 1], v[j]);
    }
}

// First k elements of a random subset of {0..n-1}, order randomized.
inline std::vector<int> sample_without_replacement(Rng& rng, int n, int k) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
        const auto j = static_cast<int>(uniform_int(rng, i, n - 1));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

inline double round_to(double v, int decimals) {
    double p = 1.0;
    for (int i = 0; i < decimals; ++i) p *= 10.0;
    return std::round(v * p) / p;
}

} // namespace chemoresp
