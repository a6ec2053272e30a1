#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace learnlab {

/// SplitMix64 finalizer. Used both as a seed mixer and to derive
/// per-replicate seeds from (base seed, replicate index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Replicate i of a run seeded with `base` uses derive_seed(base, i).
/// Serial and parallel schedules therefore see identical streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index * 0xd6e8feb86659fd93ULL + 1));
}

/// Deterministic random source. The engine is mt19937_64 (fully specified
/// by the standard); all distributions are implemented explicitly here so
/// that a seed pins down every sampled byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection; bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % bound;
    }

    /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Index sampled from a finite distribution (CDF scan; residual mass
    /// from rounding goes to the last positive-probability index).
    int categorical(std::span<const double> probs) {
        const double u = uniform01();
        double acc = 0.0;
        int last_positive = -1;
        for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
            if (probs[i] <= 0.0) continue;
            last_positive = i;
            acc += probs[i];
            if (u < acc) return i;
        }
        if (last_positive < 0) throw std::invalid_argument("Rng::categorical: empty distribution");
        return last_positive;
    }

    int categorical(const std::vector<double>& probs) {
        return categorical(std::span<const double>(probs.data(), probs.size()));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace learnlab
