#include "zsigil/hash.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace zsigil {

Seed256 sha256(std::span<const std::uint8_t> data) {
    Seed256 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw std::runtime_error("sha256: digest failed");
    return out;
}

Seed256 subseed(const Seed256& root, std::uint64_t index) {
    std::uint8_t buf[40];
    std::memcpy(buf, root.data(), 32);
    for (int i = 0; i < 8; ++i)
        buf[32 + i] = static_cast<std::uint8_t>(index >> (8 * i));
    return sha256(std::span<const std::uint8_t>(buf, sizeof buf));
}

Seed256 tagged_seed(const Seed256& root, std::string_view tag) {
    std::vector<std::uint8_t> buf(root.begin(), root.end());
    buf.insert(buf.end(), tag.begin(), tag.end());
    return sha256(buf);
}

}  // namespace zsigil
