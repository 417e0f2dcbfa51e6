#include "sid/crypto_check.hpp"

#include <string>

#include "doctest.h"
#include "sid/rng.hpp"
#include "sid/sha256.hpp"

using namespace sid;

namespace {

std::string hex_of(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (auto b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

std::vector<std::uint8_t> ascii(const std::string& s) {
    return {s.begin(), s.end()};
}

CheckScheme test_scheme(int n) { return {std::vector<std::uint8_t>(16, 0x2a), n}; }

}  // namespace

TEST_CASE("SHA-256 known-answer vectors") {
    CHECK(hex_of(Sha256::hash(ascii(""))) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(hex_of(Sha256::hash(ascii("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(hex_of(Sha256::hash(
              ascii("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // streaming across block boundaries
    Sha256 h;
    const auto part = ascii("abcdbcdecdefdefgefghfghighij");
    h.update(part);
    h.update(ascii("hijkijkljklmklmnlmnomnopnopq"));
    CHECK(hex_of(h.finish()) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("HMAC-SHA256 RFC 4231 vectors") {
    {
        const std::vector<std::uint8_t> key(20, 0x0b);
        CHECK(hex_of(HmacSha256(key).tag(ascii("Hi There"))) ==
              "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
    }
    {
        CHECK(hex_of(HmacSha256(ascii("Jefe")).tag(ascii("what do ya want for nothing?"))) ==
              "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
    }
    {
        const std::vector<std::uint8_t> key(20, 0xaa);
        const std::vector<std::uint8_t> msg(50, 0xdd);
        CHECK(hex_of(HmacSha256(key).tag(msg)) ==
              "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe");
    }
    {
        // key longer than one block
        const std::vector<std::uint8_t> key(131, 0xaa);
        CHECK(hex_of(HmacSha256(key).tag(
                  ascii("Test Using Larger Than Block-Size Key - Hash Key First"))) ==
              "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54");
    }
}

TEST_CASE("derive_tag is deterministic and respects the bit-length suffix") {
    const CheckScheme scheme = test_scheme(64);
    StreamRng rng(0x10);
    const BitVec msg = rng.bits(192);
    CHECK(derive_tag(scheme, msg, 64) == derive_tag(scheme, msg, 64));

    // 0|00 and 000 pack to the same bytes but must tag differently
    CHECK(derive_tag(scheme, BitVec{0, 0}, 64) != derive_tag(scheme, BitVec{0, 0, 0}, 64));
}

TEST_CASE("tag truncation is a prefix of the longer construction") {
    const CheckScheme scheme = test_scheme(512);
    StreamRng rng(0x11);
    const BitVec msg = rng.bits(100);
    const BitVec full = derive_tag(scheme, msg, 512);
    for (int n : {16, 64, 128, 160, 256, 320, 511}) {
        const BitVec shorter = derive_tag(scheme, msg, n);
        REQUIRE(shorter.size() == static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) CHECK(shorter[static_cast<std::size_t>(i)] == full[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("tag bit range is enforced") {
    const CheckScheme scheme = test_scheme(160);
    CHECK_THROWS_AS(derive_tag(scheme, BitVec{1}, 8), std::invalid_argument);
    CHECK_THROWS_AS(derive_tag(scheme, BitVec{1}, 513), std::invalid_argument);
    CHECK_THROWS_AS(CheckScheme({}, 160).validate(), std::invalid_argument);
}

TEST_CASE("distinct messages give distinct 64-bit tags over many pairs") {
    const CheckScheme scheme = test_scheme(64);
    StreamRng rng(0x12);
    for (int pair = 0; pair < 100'000; ++pair) {
        BitVec a = rng.bits(192);
        BitVec b = a;
        b[rng.below(192)] ^= 1;  // differs in at least one position
        CHECK(derive_tag(scheme, a, 64) != derive_tag(scheme, b, 64));
    }
}

TEST_CASE("tags depend on the key") {
    StreamRng rng(0x13);
    const BitVec msg = rng.bits(128);
    for (int trial = 0; trial < 10'000; ++trial) {
        CheckScheme k1 = test_scheme(64);
        CheckScheme k2 = test_scheme(64);
        for (auto& b : k1.key) b = static_cast<std::uint8_t>(rng.next_u64());
        k2.key = k1.key;
        k2.key[rng.below(k2.key.size())] ^= static_cast<std::uint8_t>(1 + rng.below(255));
        CHECK(derive_tag(k1, msg, 64) != derive_tag(k2, msg, 64));
    }
}

TEST_CASE("block layouts") {
    StreamRng rng(0x14);

    SUBCASE("message with tag: 192 + 128 = 320") {
        const CheckScheme scheme = test_scheme(128);
        const BitVec msg = rng.bits(192);
        const SidBlock block = build_sid_block(Scenario::MessageWithTag, msg, scheme);
        CHECK(block.width() == 320);
        CHECK(block.message_len == 192);
        CHECK(block.tag_len == 128);
        CHECK(block.bits.size() == 320);
    }
    SUBCASE("message with tag: 160 + 160 = 320") {
        const CheckScheme scheme = test_scheme(160);
        const SidBlock block = build_sid_block(Scenario::MessageWithTag, rng.bits(160), scheme);
        CHECK(block.width() == 320);
    }
    SUBCASE("detached signature: block is the 320-bit check value alone") {
        const CheckScheme scheme = test_scheme(320);
        const SidBlock block = build_sid_block(Scenario::DetachedSignature, rng.bits(256), scheme);
        CHECK(block.width() == 320);
        CHECK(block.message_len == 0);
    }
    SUBCASE("empty message is rejected outside the detached layout") {
        CHECK_THROWS_AS(build_sid_block(Scenario::MessageWithTag, BitVec{}, test_scheme(64)),
                        std::invalid_argument);
    }
}

TEST_CASE("verification accepts fresh blocks and rejects every single flip") {
    StreamRng rng(0x15);
    const CheckScheme scheme = test_scheme(128);
    const BitVec msg = rng.bits(192);
    const SidBlock block = build_sid_block(Scenario::MessageWithTag, msg, scheme);
    CHECK(verify(block, scheme).ok);

    for (std::size_t pos = 0; pos < block.bits.size(); ++pos) {
        SidBlock damaged = block;
        damaged.bits[pos] ^= 1;
        CHECK_FALSE(verify(damaged, scheme).ok);
    }
}

TEST_CASE("recovery layout returns the message on success") {
    StreamRng rng(0x16);
    const CheckScheme scheme = test_scheme(160);
    const BitVec msg = rng.bits(96);
    const SidBlock block = build_sid_block(Scenario::Recovery, msg, scheme);
    const VerifyOutcome outcome = verify(block, scheme);
    CHECK(outcome.ok);
    CHECK(outcome.recovered_message == msg);
}

TEST_CASE("detached verification compares against the reference message tag") {
    StreamRng rng(0x17);
    const CheckScheme scheme = test_scheme(160);
    const BitVec msg = rng.bits(256);
    SidBlock block = build_sid_block(Scenario::DetachedSignature, msg, scheme);
    CHECK(verify(block, scheme, msg).ok);
    block.bits[3] ^= 1;
    CHECK_FALSE(verify(block, scheme, msg).ok);
}

TEST_CASE("cached verification counts comparisons and recomputations") {
    StreamRng rng(0x18);
    const CheckScheme scheme = test_scheme(128);
    const BitVec msg = rng.bits(192);
    const SidBlock block = build_sid_block(Scenario::MessageWithTag, msg, scheme);

    VerifyCacheState cache(block, scheme);
    BitVec bits = block.bits;

    // flips confined to the tag region: comparison only
    bits[200] ^= 1;
    const std::size_t tag_flip[] = {200};
    CHECK_FALSE(cache.verify_cached(bits, tag_flip));
    CHECK(cache.comparisons() == 1);
    CHECK(cache.recomputations() == 0);
    bits[200] ^= 1;

    // a message-region flip forces a tag recomputation
    bits[5] ^= 1;
    const std::size_t msg_flip[] = {5};
    CHECK_FALSE(cache.verify_cached(bits, msg_flip));
    CHECK(cache.comparisons() == 1);
    CHECK(cache.recomputations() == 1);
    bits[5] ^= 1;

    // no flips at all: the cached tag verifies the pristine block
    CHECK(cache.verify_cached(bits, {}));
    CHECK(cache.comparisons() == 2);

    const std::size_t bad[] = {320};
    CHECK_THROWS_AS(cache.verify_cached(bits, bad), std::out_of_range);
}

TEST_CASE("cached verification agrees with plain verification on random flip sets") {
    StreamRng rng(0x19);
    const CheckScheme scheme = test_scheme(64);
    for (int run = 0; run < 200; ++run) {
        const BitVec msg = rng.bits(64);
        const SidBlock block = build_sid_block(Scenario::MessageWithTag, msg, scheme);
        // corrupt trial zero a little so both verifiers see failures too
        SidBlock start = block;
        if (run % 2 == 0) start.bits[rng.below(start.bits.size())] ^= 1;

        VerifyCacheState cache(start, scheme);
        BitVec bits = start.bits;
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::size_t> flips;
            for (std::size_t pos = 0; pos < bits.size(); ++pos)
                if (rng.below(16) == 0) flips.push_back(pos);
            for (auto pos : flips) bits[pos] ^= 1;
            const SidBlock probe{bits, block.layout, block.message_len, block.tag_len};
            CHECK(cache.verify_cached(bits, flips) == verify(probe, scheme).ok);
            for (auto pos : flips) bits[pos] ^= 1;
        }
    }
}

TEST_CASE("recomputation share follows the message fraction of the block") {
    StreamRng rng(0x1A);
    const CheckScheme scheme = test_scheme(128);
    const BitVec msg = rng.bits(192);
    const SidBlock block = build_sid_block(Scenario::MessageWithTag, msg, scheme);
    VerifyCacheState cache(block, scheme);

    BitVec bits = block.bits;
    const long trials = 10'000;
    for (long t = 0; t < trials; ++t) {
        const std::size_t pos = rng.below(bits.size());
        bits[pos] ^= 1;
        const std::size_t flips[] = {pos};
        cache.verify_cached(bits, flips);
        bits[pos] ^= 1;
    }
    const double ratio =
        static_cast<double>(cache.recomputations()) / static_cast<double>(trials);
    CHECK(ratio == doctest::Approx(192.0 / 320.0).epsilon(0.10));
}
