#pragma once

/**
 * @file rng.hpp
 * @brief Portable counter-based random stream.
 *
 * Every draw is a pure function of (key, index), so sequences can be
 * materialized in any order or in parallel and still match bit for bit.
 *
 *   mix(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *             z =  z ^ (z >> 31)                      (SplitMix64 finalizer)
 *   key(seed, stream) = mix(seed ^ mix(stream + 0xD1B54A32D192ED03))
 *   bits(key, i)      = mix(key + (i + 1) * 0x9E3779B97F4A7C15)
 *   uniform(key, i)   = (bits(key, i) >> 11) * 2^-53     in [0, 1)
 *
 * All arithmetic is modulo 2^64.
 */

#include <cstdint>
#include <string_view>

namespace edlab::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// FNV-1a, used to turn a stream label into a stream id.
constexpr std::uint64_t hash_label(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

class CounterStream {
  public:
    constexpr CounterStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + kStreamSalt))) {}
    constexpr CounterStream(std::uint64_t seed, std::string_view label) noexcept
        : CounterStream(seed, hash_label(label)) {}

    constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
        return mix(key_ + (index + 1) * kGamma);
    }
    constexpr double uniform(std::uint64_t index) const noexcept {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }
    /// +1 or -1 from the top bit.
    constexpr int sign(std::uint64_t index) const noexcept {
        return (bits(index) >> 63) ? -1 : 1;
    }
    /// Uniform integer in [0, n), n > 0 (multiply-shift, bias < n / 2^64).
    std::uint64_t below(std::uint64_t index, std::uint64_t n) const noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(bits(index)) * n) >> 64);
    }
    /// Child stream; children of distinct ids are independent streams.
    constexpr CounterStream child(std::uint64_t id) const noexcept {
        return CounterStream(key_, id);
    }
    constexpr std::uint64_t key() const noexcept { return key_; }

  private:
    std::uint64_t key_;
};

} // namespace edlab::rng
