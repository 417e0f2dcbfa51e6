#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sid {

// One bit per element, values restricted to 0/1.
using BitVec = std::vector<std::uint8_t>;

// Packs bits MSB-first into bytes; the last byte is zero-padded.
inline std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] & 1) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

inline BitVec unpack_bits(std::span<const std::uint8_t> bytes, std::size_t nbits) {
    if (nbits > bytes.size() * 8) throw std::invalid_argument("unpack_bits: not enough bytes");
    BitVec out(nbits);
    for (std::size_t i = 0; i < nbits; ++i)
        out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return out;
}

inline void flip_bit(BitVec& bits, std::size_t pos) {
    if (pos >= bits.size()) throw std::out_of_range("flip_bit: position out of range");
    bits[pos] ^= 1;
}

inline BitVec xor_bits(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
    BitVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

}  // namespace sid
