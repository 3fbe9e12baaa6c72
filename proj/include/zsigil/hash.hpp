#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "zsigil/common.hpp"

namespace zsigil {

/// SHA-256 of an arbitrary byte string (OpenSSL EVP under the hood).
Seed256 sha256(std::span<const std::uint8_t> data);

/// SHA-256 of seed-material plus a 64-bit little-endian index, the
/// per-block subseed construction used by key and chain derivation.
Seed256 subseed(const Seed256& root, std::uint64_t index);

/// Domain-separated reseed: SHA-256 of seed-material plus an ASCII tag.
Seed256 tagged_seed(const Seed256& root, std::string_view tag);

}  // namespace zsigil
