#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sid/conv_code.hpp"

namespace sid {

// Rate-1/3 parallel-concatenated code: two recursive systematic constituents
// sharing one systematic stream, joined by a block interleaver. Constituent
// generators are {feedback, feedforward}; the first constituent is trellis
// terminated, the second is left open.
struct TurboSpec {
    ConvCodeSpec constituent{.memory = 2, .generators = {0b111u, 0b101u}, .terminated = true};
    int interleaver_depth = 17;
    int iterations = 3;

    void validate() const;
};

// Row-write by `depth` columns, column-read. A bijection for every length;
// a ragged last row is read in column order as usual.
std::vector<std::size_t> interleave_permutation(std::size_t length, int depth);

template <typename T>
std::vector<T> interleave(std::span<const T> seq, int depth) {
    const auto perm = interleave_permutation(seq.size(), depth);
    std::vector<T> out(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[perm[i]];
    return out;
}

template <typename T>
std::vector<T> deinterleave(std::span<const T> seq, int depth) {
    const auto perm = interleave_permutation(seq.size(), depth);
    std::vector<T> out(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) out[perm[i]] = seq[i];
    return out;
}

inline BitVec interleave_bits(const BitVec& b, int depth) {
    return interleave<std::uint8_t>(b, depth);
}

// Per information bit: systematic, parity 1, parity 2. Then 2m termination
// bits of the first constituent as (tail info, tail parity) pairs, so the
// output holds 3k + 2m bits in total.
BitVec turbo_encode(std::span<const std::uint8_t> info_bits, const TurboSpec& spec);

// Iterative decoding with `spec.iterations` rounds of extrinsic exchange
// between the two constituent BCJR decoders. Returns the a-posteriori
// L-value per information bit after the final half-iteration.
std::vector<double> turbo_decode(std::span<const double> channel_llrs, const TurboSpec& spec);

// A-posteriori output of the first constituent alone (zero a-priori), i.e.
// what the first half-iteration of turbo_decode sees before any exchange.
std::vector<double> turbo_first_constituent_app(std::span<const double> channel_llrs,
                                                const TurboSpec& spec);

}  // namespace sid
