#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>

#include "zsigil/common.hpp"

namespace zsigil {

/// Anything that yields 64 random-ish bits per call. The production
/// generator is Xoshiro256ss below; tests may plug in degenerate sources.
template <class G>
concept BitSource = requires(G g) {
    { g() } -> std::convertible_to<std::uint64_t>;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

/// xoshiro256** by Blackman and Vigna. Hand-rolled (rather than <random>
/// engines plus distributions) so that every derived quantity is
/// bitwise-reproducible across standard library implementations; the
/// pinned file formats depend on that.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(const Seed256& seed) {
        for (int i = 0; i < 4; ++i) {
            std::uint64_t w = 0;
            for (int b = 0; b < 8; ++b)
                w |= static_cast<std::uint64_t>(seed[8 * i + b]) << (8 * b);
            state_[i] = w;
        }
        // all-zero state is a fixed point of the engine
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            std::uint64_t sm = 0x5a75d1b585f47c15ull;
            for (auto& s : state_) s = detail::splitmix64(sm);
        }
    }

    explicit Xoshiro256ss(std::uint64_t word) {
        std::uint64_t sm = word;
        for (auto& s : state_) s = detail::splitmix64(sm);
    }

    std::uint64_t operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

/// Uniform double in [0, 1), 53 significant bits.
template <BitSource G>
double uniform_unit(G& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
template <BitSource G>
double uniform_range(G& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

/// Uniform integer in [0, n), n >= 1, by rejection on the top bits.
template <BitSource G>
std::uint64_t uniform_below(G& gen, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do {
        v = gen();
    } while (v >= limit);
    return v % n;
}

/// Standard normal deviates via the Marsaglia polar method. Stateful so
/// that the paired deviate is not discarded.
template <BitSource G>
class NormalSampler {
public:
    double operator()(G& gen) {
        if (cached_) {
            double v = *cached_;
            cached_.reset();
            return v;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform_unit(gen) - 1.0;
            v = 2.0 * uniform_unit(gen) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * scale;
        return u * scale;
    }

private:
    std::optional<double> cached_;
};

/// One-shot standard normal (no pairing).
template <BitSource G>
double normal_deviate(G& gen) {
    NormalSampler<G> sampler;
    return sampler(gen);
}

}  // namespace zsigil
