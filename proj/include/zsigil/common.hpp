#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zsigil {

inline constexpr int kFormatVersion = 1;

/// 256-bit seed. All randomness in the library flows through values of
/// this type; identical seeds give bitwise-identical results.
using Seed256 = std::array<std::uint8_t, 32>;

// ---------------------------------------------------------------------------
// Error types. The CLI maps these onto its exit codes.
// ---------------------------------------------------------------------------

/// A resampling budget was exhausted while deriving keys, frames or chain
/// factors from a seed.
struct GenerationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Message does not fit into the key's block capacity.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decryption produced a value outside the rounding margin, or the
/// recovered block stream is not a valid UTF-16 sequence.
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A key or ciphertext file failed to parse.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Hex helpers for seeds.
// ---------------------------------------------------------------------------

inline std::string to_hex(const Seed256& seed) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint8_t b : seed) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline Seed256 seed_from_hex(std::string_view hex) {
    if (hex.size() != 64)
        throw FormatError("seed must be 64 hex characters");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FormatError("invalid hex character in seed");
    };
    Seed256 seed{};
    for (std::size_t i = 0; i < 32; ++i)
        seed[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return seed;
}

}  // namespace zsigil
