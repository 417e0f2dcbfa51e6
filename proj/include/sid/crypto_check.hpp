#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sid/bits.hpp"
#include "sid/sha256.hpp"

namespace sid {

// Which bits make up the block under correction.
enum class Scenario {
    Recovery,           // message recovered from the check value on success
    DetachedSignature,  // block is only the check value of an external message
    MessageWithTag,     // message followed by its check value
};

// Keyed-hash check value; one construction stands in for signatures, MACs and
// H-MACs alike since correction only needs "any bit change fails verification".
struct CheckScheme {
    std::vector<std::uint8_t> key;
    int tag_bits = 160;

    void validate() const;
};

struct SidBlock {
    BitVec bits;
    Scenario layout = Scenario::MessageWithTag;
    int message_len = 0;  // 0 for DetachedSignature
    int tag_len = 0;

    int width() const { return message_len + tag_len; }
};

// First n bits of HMAC-SHA256(key, packed message || bit length || counter),
// extended block-wise for n > 256. The bit-length suffix keeps bit strings of
// different lengths with equal byte packing apart.
BitVec derive_tag(const CheckScheme& scheme, std::span<const std::uint8_t> message_bits, int n);

// Recovery / MessageWithTag lay the block out as message || tag; a
// DetachedSignature block is the tag of the supplied message alone.
SidBlock build_sid_block(Scenario scenario, std::span<const std::uint8_t> message_bits,
                         const CheckScheme& scheme);

struct VerifyOutcome {
    bool ok = false;
    BitVec recovered_message;  // filled on Recovery success
};

// reference_message supplies the externally known message for
// DetachedSignature blocks and is ignored otherwise.
VerifyOutcome verify(const SidBlock& block, const CheckScheme& scheme,
                     std::span<const std::uint8_t> reference_message = {});

// Verification state for one correction run. The tag of the trial-zero
// message region is cached; a trial whose flips stay inside the tag region
// is decided by comparison alone, everything else recomputes.
class VerifyCacheState {
public:
    VerifyCacheState(const SidBlock& trial_zero, const CheckScheme& scheme,
                     std::span<const std::uint8_t> reference_message = {});

    // block_bits is the full trial block; flipped_positions lists where it
    // differs from the trial-zero block.
    bool verify_cached(std::span<const std::uint8_t> block_bits,
                       std::span<const std::size_t> flipped_positions);

    long recomputations() const { return recomputations_; }
    long comparisons() const { return comparisons_; }

private:
    HmacSha256 hmac_;
    Scenario layout_;
    int message_len_ = 0;
    int tag_len_ = 0;
    BitVec cached_tag_;  // tag of the trial-zero message region
    long recomputations_ = 0;
    long comparisons_ = 0;
};

}  // namespace sid
