#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ffv {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Mix a base seed with a label to get an independent stream seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return splitmix64(base ^ splitmix64(tag));
}

/// Deterministic RNG. All sampling is hand-rolled on top of the raw
/// mt19937_64 stream (which the standard pins bit-for-bit), so sequences
/// are reproducible across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t u64() { return gen_(); }

    /// Uniform in [0, n), n >= 1, by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = gen_(); } while (v >= limit);
        return v % n;
    }

    /// Uniform integer in [lo, hi] inclusive.
    long long range(long long lo, long long hi) {
        return lo + (long long)below((std::uint64_t)(hi - lo + 1));
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double real01() { return (double)(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * real01(); }

    bool bernoulli(double p) { return real01() < p; }

    /// Poisson by CDF inversion; adequate for the small means used here.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        double u = real01();
        double p = std::exp(-mean), cdf = p;
        int n = 0;
        while (u > cdf && n < 10000) {
            ++n;
            p *= mean / n;
            cdf += p;
        }
        return n;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace ffv
