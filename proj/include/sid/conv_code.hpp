#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sid/bits.hpp"

namespace sid {

// Rate-1/2 binary convolutional code. Generator masks are m+1 bits wide with
// the current input bit as MSB, e.g. memory 2 with generators {0b101, 0b111}
// is the classic (5,7) octal code.
struct ConvCodeSpec {
    int memory = 2;
    std::array<unsigned, 2> generators{0b101u, 0b111u};
    bool terminated = true;

    void validate() const;
};

// Deterministic 2^m-state transition graph with two coded output bits per
// branch. Covers both the feedforward code above and the recursive
// systematic form used by the turbo constituents (output 0 = systematic bit,
// output 1 = parity).
class Trellis {
public:
    struct Branch {
        int next_state = 0;
        std::array<std::uint8_t, 2> out{0, 0};
    };

    static Trellis feedforward(const ConvCodeSpec& spec);
    // generators[0] is the feedback mask, generators[1] the feedforward mask.
    static Trellis recursive_systematic(const ConvCodeSpec& spec);

    int num_states() const { return num_states_; }
    int memory() const { return memory_; }
    const Branch& branch(int state, int input) const { return branches_[2 * state + input]; }
    // Input bit that drives the register one step toward the all-zero state.
    std::uint8_t termination_input(int state) const { return tail_input_[state]; }

private:
    Trellis(int memory, bool recursive, const ConvCodeSpec& spec);

    int memory_ = 0;
    int num_states_ = 0;
    std::vector<Branch> branches_;
    std::vector<std::uint8_t> tail_input_;
};

// Shift-register encode; appends m termination branches when spec.terminated.
// Output holds 2*(k+m) bits, the two generator streams interleaved per branch.
BitVec conv_encode(std::span<const std::uint8_t> info_bits, const ConvCodeSpec& spec);

// Log-domain BCJR over an arbitrary trellis. channel_llrs carries one value
// per coded bit (sign convention: positive means bit 0 is more likely),
// apriori one value per information step (may be empty). The final tail_steps
// trellis steps are restricted to the termination branch of each state and
// produce no output. Returns one a-posteriori L-value per information step.
std::vector<double> trellis_bcjr(const Trellis& trellis, std::span<const double> channel_llrs,
                                 std::span<const double> apriori, int info_steps, int tail_steps,
                                 bool terminated_end);

// A-posteriori information-bit L-values for the code in `spec`; tail L-values
// are dropped. channel_llrs must cover the full encoded block incl. the tail.
std::vector<double> bcjr_decode(std::span<const double> channel_llrs, const ConvCodeSpec& spec);

// Exact per-bit posterior by enumerating all 2^k codewords. Test oracle;
// refuses k > 16.
std::vector<double> brute_force_posterior(std::span<const double> channel_llrs,
                                          const ConvCodeSpec& spec);

// max*(a, b) = ln(e^a + e^b), evaluated with the exact correction term.
double max_star(double a, double b);

}  // namespace sid
