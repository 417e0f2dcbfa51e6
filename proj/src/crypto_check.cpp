#include "sid/crypto_check.hpp"

#include <algorithm>
#include <stdexcept>

namespace sid {

namespace {

constexpr int kMinTagBits = 16;
constexpr int kMaxTagBits = 512;

// Packed message, 64-bit big-endian bit count, then a one-byte block counter.
std::vector<std::uint8_t> tag_input(std::span<const std::uint8_t> message_bits,
                                    std::uint8_t counter) {
    std::vector<std::uint8_t> data = pack_bits(message_bits);
    const std::uint64_t bit_len = message_bits.size();
    for (int i = 0; i < 8; ++i)
        data.push_back(static_cast<std::uint8_t>(bit_len >> (56 - 8 * i)));
    data.push_back(counter);
    return data;
}

BitVec tag_with(const HmacSha256& hmac, std::span<const std::uint8_t> message_bits, int n) {
    std::vector<std::uint8_t> stream;
    stream.reserve((static_cast<std::size_t>(n) + 7) / 8);
    std::uint8_t counter = 0;
    while (stream.size() * 8 < static_cast<std::size_t>(n)) {
        const auto digest = hmac.tag(tag_input(message_bits, counter++));
        stream.insert(stream.end(), digest.begin(), digest.end());
    }
    return unpack_bits(stream, static_cast<std::size_t>(n));
}

}  // namespace

void CheckScheme::validate() const {
    if (key.empty()) throw std::invalid_argument("CheckScheme: key must be nonempty");
    if (tag_bits < kMinTagBits || tag_bits > kMaxTagBits)
        throw std::invalid_argument("CheckScheme: tag_bits out of [16, 512]");
}

BitVec derive_tag(const CheckScheme& scheme, std::span<const std::uint8_t> message_bits, int n) {
    scheme.validate();
    if (n < kMinTagBits || n > kMaxTagBits)
        throw std::invalid_argument("derive_tag: n out of [16, 512]");
    return tag_with(HmacSha256(scheme.key), message_bits, n);
}

SidBlock build_sid_block(Scenario scenario, std::span<const std::uint8_t> message_bits,
                         const CheckScheme& scheme) {
    scheme.validate();
    if (scenario != Scenario::DetachedSignature && message_bits.empty())
        throw std::invalid_argument("build_sid_block: message must be nonempty");

    const BitVec tag = derive_tag(scheme, message_bits, scheme.tag_bits);
    SidBlock block;
    block.layout = scenario;
    block.tag_len = scheme.tag_bits;
    if (scenario == Scenario::DetachedSignature) {
        block.message_len = 0;
        block.bits = tag;
    } else {
        block.message_len = static_cast<int>(message_bits.size());
        block.bits.assign(message_bits.begin(), message_bits.end());
        block.bits.insert(block.bits.end(), tag.begin(), tag.end());
    }
    return block;
}

VerifyOutcome verify(const SidBlock& block, const CheckScheme& scheme,
                     std::span<const std::uint8_t> reference_message) {
    scheme.validate();
    if (block.bits.size() != static_cast<std::size_t>(block.width()))
        throw std::invalid_argument("verify: block bits inconsistent with layout");

    VerifyOutcome outcome;
    if (block.layout == Scenario::DetachedSignature) {
        const BitVec expected = derive_tag(scheme, reference_message, block.tag_len);
        outcome.ok = std::equal(expected.begin(), expected.end(), block.bits.begin());
        return outcome;
    }

    const std::span<const std::uint8_t> message{block.bits.data(),
                                                static_cast<std::size_t>(block.message_len)};
    const BitVec expected = derive_tag(scheme, message, block.tag_len);
    outcome.ok = std::equal(expected.begin(), expected.end(),
                            block.bits.begin() + block.message_len);
    if (outcome.ok && block.layout == Scenario::Recovery)
        outcome.recovered_message.assign(message.begin(), message.end());
    return outcome;
}

VerifyCacheState::VerifyCacheState(const SidBlock& trial_zero, const CheckScheme& scheme,
                                   std::span<const std::uint8_t> reference_message)
    : hmac_(scheme.key),
      layout_(trial_zero.layout),
      message_len_(trial_zero.message_len),
      tag_len_(trial_zero.tag_len) {
    scheme.validate();
    if (layout_ == Scenario::DetachedSignature) {
        cached_tag_ = tag_with(hmac_, reference_message, tag_len_);
    } else {
        cached_tag_ = tag_with(
            hmac_, {trial_zero.bits.data(), static_cast<std::size_t>(message_len_)}, tag_len_);
    }
}

bool VerifyCacheState::verify_cached(std::span<const std::uint8_t> block_bits,
                                     std::span<const std::size_t> flipped_positions) {
    const std::size_t w = static_cast<std::size_t>(message_len_ + tag_len_);
    if (block_bits.size() != w)
        throw std::invalid_argument("verify_cached: block width mismatch");
    for (std::size_t pos : flipped_positions)
        if (pos >= w) throw std::out_of_range("verify_cached: flip position out of range");

    const bool message_touched =
        std::any_of(flipped_positions.begin(), flipped_positions.end(),
                    [this](std::size_t pos) { return pos < static_cast<std::size_t>(message_len_); });

    const std::uint8_t* tag_region = block_bits.data() + message_len_;
    if (message_touched) {
        ++recomputations_;
        const BitVec tag =
            tag_with(hmac_, {block_bits.data(), static_cast<std::size_t>(message_len_)}, tag_len_);
        return std::equal(tag.begin(), tag.end(), tag_region);
    }
    ++comparisons_;
    return std::equal(cached_tag_.begin(), cached_tag_.end(), tag_region);
}

}  // namespace sid
