#include "blindpol/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace blindpol {

std::vector<std::uint8_t> pack_bits_msb_first(std::span<const int> bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const int bit = bits[i];
        if (bit != 0 && bit != 1) {
            throw std::invalid_argument("pack_bits_msb_first: bits must be 0 or 1");
        }
        if (bit) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return bytes;
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, 32> digest{};
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("sha256: EVP_MD_CTX_new failed");
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                    (data.empty() || EVP_DigestUpdate(ctx, data.data(), data.size()) == 1) &&
                    EVP_DigestFinal_ex(ctx, digest.data(), &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok || len != digest.size()) throw std::runtime_error("sha256: digest failed");
    return digest;
}

std::array<std::uint8_t, 32> sha256_bits(std::span<const int> bits) {
    const std::vector<std::uint8_t> packed = pack_bits_msb_first(bits);
    return sha256(packed);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

}  // namespace blindpol
