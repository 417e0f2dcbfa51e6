#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include "sid/bits.hpp"

namespace sid {

// Deterministic per-stream random source. Streams are derived from a base
// seed plus an arbitrary key tuple (e.g. sweep index, block index, substream),
// so simulation results do not depend on call order or thread scheduling.
//
// Core generator is splitmix64; Gaussians come from Box-Muller on the
// generator's own uniforms, keeping every draw platform-independent.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed, std::initializer_list<std::uint64_t> key = {}) {
        state_ = mix(seed + kGolden);
        for (std::uint64_t k : key) state_ = mix(state_ ^ (k + kGolden));
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    int bit() { return static_cast<int>(next_u64() >> 63); }

    BitVec bits(std::size_t n) {
        BitVec out(n);
        for (auto& b : out) b = static_cast<std::uint8_t>(bit());
        return out;
    }

    std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

    // Standard normal deviate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace sid
