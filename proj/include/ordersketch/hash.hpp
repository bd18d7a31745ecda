#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace ordersketch {

/// 64-bit FNV-1a over the raw bytes of `s`.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// SplitMix64 finalizer (no golden-ratio increment).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seeds and target dimension for the bucket hash and the sign hash.
struct HashSpec {
    std::uint64_t seed1 = 0;
    std::uint64_t seed2 = 0;
    std::size_t d = 1;

    HashSpec() = default;
    HashSpec(std::uint64_t s1, std::uint64_t s2, std::size_t dim) : seed1(s1), seed2(s2), d(dim) {
        if (d == 0) throw std::invalid_argument("embedding dimension must be >= 1");
    }

    /// Seeds keyed on (base, d) for dimension sweeps.
    static HashSpec derived(std::uint64_t base, std::size_t dim) {
        const std::uint64_t k = mix64(base ^ mix64(dim + 0x9E3779B97F4A7C15ULL));
        return HashSpec(mix64(k ^ 0x1ULL), mix64(k ^ 0x2ULL), dim);
    }

    friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

/// Bucket in [0, d).
constexpr std::size_t h1(std::string_view key, const HashSpec& spec) noexcept {
    return static_cast<std::size_t>(mix64(fnv1a64(key) ^ spec.seed1) % spec.d);
}

/// +1 or -1.
constexpr int h2(std::string_view key, const HashSpec& spec) noexcept {
    return (mix64(fnv1a64(key) ^ spec.seed2) & 1ULL) == 0 ? 1 : -1;
}

}  // namespace ordersketch
