#pragma once

#include <cstdint>

namespace ballpark {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer: a 64-bit bijection with full avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Seedable hash over 64-bit item ids. The seed is mixed once up front so that
// nearby seeds still produce unrelated hash streams.
class ItemHash {
public:
    explicit constexpr ItemHash(std::uint64_t seed = 0) noexcept
        : salt_(mix64(seed + kGoldenGamma)) {}

    constexpr std::uint64_t operator()(std::uint64_t item) const noexcept {
        return mix64(item ^ salt_);
    }

private:
    std::uint64_t salt_;
};

// splitmix64 stream, used to derive families of seeds deterministically.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

// Unbiased draw from [0, bound). Written out (Lemire multiply-reject) instead
// of std::uniform_int_distribution, whose output is implementation-defined;
// generated graphs must be reproducible across standard libraries.
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    unsigned __int128 product = static_cast<unsigned __int128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(rng()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace ballpark
