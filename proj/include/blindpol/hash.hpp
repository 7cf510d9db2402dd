#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace blindpol {

// Packs a bit sequence (values 0/1) into octets MSB-first; the final octet
// is zero-padded on the right.  An empty sequence packs to an empty vector.
std::vector<std::uint8_t> pack_bits_msb_first(std::span<const int> bits);

// SHA-256 digest of a byte string.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

// Convenience: pack the bits and hash the packed bytes.
std::array<std::uint8_t, 32> sha256_bits(std::span<const int> bits);

// Lowercase hex encoding.
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace blindpol
