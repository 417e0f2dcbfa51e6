#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sid/bits.hpp"
#include "sid/crypto_check.hpp"

namespace sid {

// One row per block position, sorted by ascending reliability. rank is the
// 1-based index j of the sorted table, position the original block index.
struct RankedEntry {
    int rank = 0;
    std::size_t position = 0;
    double abs_llr = 0.0;
};

struct RankedPositions {
    std::vector<RankedEntry> table;

    std::size_t width() const { return table.size(); }
    // Block position carrying the j-th lowest reliability (j is 1-based).
    std::size_t position_of_rank(int j) const {
        return table[static_cast<std::size_t>(j - 1)].position;
    }
};

// Equal magnitudes keep ascending block position, so runs are reproducible
// across platforms.
RankedPositions rank_positions(std::span<const double> llrs);

// Trial i of the counter-driven schedule: flip exactly the positions whose
// rank j has bit j-1 set in i. Valid for 1 <= i <= 2^n_max - 1.
std::vector<std::size_t> static_trial(std::uint64_t i, const RankedPositions& ranked, int n_max);

// The full flip schedule of the error-count-guided strategy as rank sets
// (1-based). Subset sizes are ordered by descending probability that the
// block holds exactly that many errors (ties: smaller size first); inside a
// size, subsets come lexicographically. Covers every nonempty subset of
// {1..n_max} exactly once. Intended for tests and small n_max; the decrypt
// loop enumerates the same schedule lazily.
std::vector<std::vector<int>> ber_trial_sequence(int n_max, int w, double p);

enum class StrategyKind { Static, BerBased };

struct SidStrategy {
    StrategyKind kind = StrategyKind::Static;
    double post_decoder_ber = 0.0;  // only used by BerBased
};

// Streaming view of a strategy's flip schedule.
class TrialEnumerator {
public:
    static TrialEnumerator static_order(int n_max);
    static TrialEnumerator ber_order(int n_max, int w, double p);

    // Writes the next trial's rank set (ascending, 1-based); false when the
    // 2^n_max - 1 trials are exhausted.
    bool next(std::vector<int>& ranks);

private:
    TrialEnumerator() = default;

    int n_max_ = 0;
    bool ber_ = false;
    std::uint64_t counter_ = 0;       // static schedule
    std::vector<int> size_order_;     // ber schedule
    std::size_t size_idx_ = 0;
    std::vector<int> combo_;
    bool combo_fresh_ = false;
};

struct BlockLayout {
    Scenario scenario = Scenario::MessageWithTag;
    int message_len = 0;
    int tag_len = 0;

    int width() const { return message_len + tag_len; }
};

enum class SidResultKind { VerifiedFirstTry, Corrected, Failed };

struct SidOutcome {
    SidResultKind kind = SidResultKind::Failed;
    std::uint64_t trials_used = 0;
    std::vector<std::size_t> flipped_positions;  // successful trial, block positions
    int max_flip_rank = 0;                       // highest rank j in that trial
    bool is_collision = false;                   // simulation-only, set by classify()
    BitVec bits;                                 // block bits after the attempt
    long tag_recomputations = 0;
    long tag_comparisons = 0;
};

// The correction loop: hard-decide the block from the L-value signs, verify,
// and on failure walk the strategy's flip schedule (each trial flips relative
// to the hard decision) until a verification passes or the budget of
// 2^n_max - 1 trials is spent. Success is always backed by a verification.
SidOutcome soft_input_decrypt(std::span<const double> llrs, const BlockLayout& layout,
                              const CheckScheme& scheme, const SidStrategy& strategy, int n_max,
                              std::span<const std::uint8_t> detached_reference = {});

enum class Classification { Correct, Incorrect, Collision };

// Ground-truth comparison for simulations. Collisions (verified but not equal
// to the original) are flagged on the outcome and count as incorrect blocks.
Classification classify(SidOutcome& outcome, std::span<const std::uint8_t> decoded_bits_after_sid,
                        std::span<const std::uint8_t> original_bits);

}  // namespace sid
