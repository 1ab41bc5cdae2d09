#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>

namespace rcausal {

// SplitMix64: tiny, fast, and good enough to drive shuffles. Satisfies
// UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Mixes a root seed with stream coordinates (pair, lag, realization, ...)
/// into an independent-looking 64-bit seed. Order of the parts matters.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) {
        SplitMix64 mix(h ^ (p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
        h = mix();
    }
    return h;
}

/// Uniform integer in [0, bound) without modulo bias.
template <typename Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

/// Fisher-Yates. Unlike std::shuffle the permutation drawn for a given
/// generator state is the same on every standard library.
template <typename T, typename Rng>
void shuffle_in_place(std::span<T> values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        using std::swap;
        swap(values[i - 1], values[j]);
    }
}

}  // namespace rcausal
