#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace sid {

// FIPS 180-4 SHA-256, streaming interface.
class Sha256 {
public:
    static constexpr std::size_t kDigestSize = 32;
    using Digest = std::array<std::uint8_t, kDigestSize>;

    Sha256() { reset(); }

    void reset();
    void update(std::span<const std::uint8_t> data);
    Digest finish();  // leaves the object in an undefined state until reset()

    static Digest hash(std::span<const std::uint8_t> data) {
        Sha256 h;
        h.update(data);
        return h.finish();
    }

private:
    friend class HmacSha256;

    void compress(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_{};
    std::array<std::uint8_t, 64> buffer_{};
    std::uint64_t total_bytes_ = 0;
    std::size_t buffered_ = 0;
};

// RFC 2104 HMAC over SHA-256. The key-pad compressions are precomputed at
// construction, so repeated tags for the same key cost two compressions less.
class HmacSha256 {
public:
    explicit HmacSha256(std::span<const std::uint8_t> key);

    Sha256::Digest tag(std::span<const std::uint8_t> message) const;

private:
    std::array<std::uint32_t, 8> inner_state_{};
    std::array<std::uint32_t, 8> outer_state_{};
};

}  // namespace sid
