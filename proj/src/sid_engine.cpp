#include "sid/sid_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sid/analytics.hpp"

namespace sid {

namespace {

constexpr int kMaxFlipBudgetBits = 24;

// Sizes 1..n_max ordered by descending P(block has exactly that many errors).
std::vector<int> ber_size_order(int n_max, int w, double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("ber strategy: post-decoder BER must be in (0, 1)");
    std::vector<int> sizes(static_cast<std::size_t>(n_max));
    std::iota(sizes.begin(), sizes.end(), 1);
    std::stable_sort(sizes.begin(), sizes.end(), [&](int lhs, int rhs) {
        const double pl = analytics::p_block_errors(w, lhs, p);
        const double pr = analytics::p_block_errors(w, rhs, p);
        if (pl != pr) return pl > pr;
        return lhs < rhs;
    });
    return sizes;
}

// Lexicographically next size-s subset of {1..n_max}; false when exhausted.
bool next_combination(std::vector<int>& combo, int n_max) {
    const int s = static_cast<int>(combo.size());
    int i = s - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == n_max - (s - 1 - i)) --i;
    if (i < 0) return false;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j)
        combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

}  // namespace

RankedPositions rank_positions(std::span<const double> llrs) {
    RankedPositions ranked;
    ranked.table.resize(llrs.size());
    for (std::size_t i = 0; i < llrs.size(); ++i)
        ranked.table[i] = {0, i, std::abs(llrs[i])};
    std::sort(ranked.table.begin(), ranked.table.end(),
              [](const RankedEntry& lhs, const RankedEntry& rhs) {
                  if (lhs.abs_llr != rhs.abs_llr) return lhs.abs_llr < rhs.abs_llr;
                  return lhs.position < rhs.position;
              });
    for (std::size_t j = 0; j < ranked.table.size(); ++j)
        ranked.table[j].rank = static_cast<int>(j + 1);
    return ranked;
}

std::vector<std::size_t> static_trial(std::uint64_t i, const RankedPositions& ranked, int n_max) {
    if (n_max < 1 || static_cast<std::size_t>(n_max) > ranked.width())
        throw std::invalid_argument("static_trial: n_max out of range");
    if (i < 1 || i > ((1ull << n_max) - 1))
        throw std::invalid_argument("static_trial: trial counter out of range");
    std::vector<std::size_t> positions;
    for (int j = 1; j <= n_max; ++j)
        if (i & (1ull << (j - 1))) positions.push_back(ranked.position_of_rank(j));
    return positions;
}

std::vector<std::vector<int>> ber_trial_sequence(int n_max, int w, double p) {
    // Materializes 2^n_max - 1 sets; larger budgets go through TrialEnumerator.
    if (n_max < 1 || n_max > 20)
        throw std::invalid_argument("ber_trial_sequence: n_max out of range");
    std::vector<std::vector<int>> sequence;
    sequence.reserve((1ull << n_max) - 1);
    for (int s : ber_size_order(n_max, w, p)) {
        std::vector<int> combo(static_cast<std::size_t>(s));
        std::iota(combo.begin(), combo.end(), 1);
        do {
            sequence.push_back(combo);
        } while (next_combination(combo, n_max));
    }
    return sequence;
}

TrialEnumerator TrialEnumerator::static_order(int n_max) {
    TrialEnumerator e;
    e.n_max_ = n_max;
    e.ber_ = false;
    e.counter_ = 0;
    return e;
}

TrialEnumerator TrialEnumerator::ber_order(int n_max, int w, double p) {
    TrialEnumerator e;
    e.n_max_ = n_max;
    e.ber_ = true;
    e.size_order_ = ber_size_order(n_max, w, p);
    e.size_idx_ = 0;
    e.combo_fresh_ = false;
    return e;
}

bool TrialEnumerator::next(std::vector<int>& ranks) {
    if (!ber_) {
        if (counter_ >= (1ull << n_max_) - 1) return false;
        ++counter_;
        ranks.clear();
        for (int j = 1; j <= n_max_; ++j)
            if (counter_ & (1ull << (j - 1))) ranks.push_back(j);
        return true;
    }
    while (size_idx_ < size_order_.size()) {
        const int s = size_order_[size_idx_];
        if (!combo_fresh_) {
            combo_.assign(static_cast<std::size_t>(s), 0);
            std::iota(combo_.begin(), combo_.end(), 1);
            combo_fresh_ = true;
            ranks = combo_;
            return true;
        }
        if (next_combination(combo_, n_max_)) {
            ranks = combo_;
            return true;
        }
        ++size_idx_;
        combo_fresh_ = false;
    }
    return false;
}

SidOutcome soft_input_decrypt(std::span<const double> llrs, const BlockLayout& layout,
                              const CheckScheme& scheme, const SidStrategy& strategy, int n_max,
                              std::span<const std::uint8_t> detached_reference) {
    const int w = layout.width();
    if (llrs.size() != static_cast<std::size_t>(w))
        throw std::invalid_argument("soft_input_decrypt: L-value count must equal block width");
    if (n_max < 1 || n_max > w || n_max > kMaxFlipBudgetBits)
        throw std::invalid_argument("soft_input_decrypt: n_max out of range");

    SidOutcome outcome;
    outcome.bits.resize(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i)
        outcome.bits[static_cast<std::size_t>(i)] =
            llrs[static_cast<std::size_t>(i)] >= 0.0 ? 0 : 1;

    SidBlock block{outcome.bits, layout.scenario, layout.message_len, layout.tag_len};
    if (verify(block, scheme, detached_reference).ok) {
        outcome.kind = SidResultKind::VerifiedFirstTry;
        return outcome;
    }

    const RankedPositions ranked = rank_positions(llrs);
    VerifyCacheState cache(block, scheme, detached_reference);
    TrialEnumerator trials = strategy.kind == StrategyKind::Static
                                 ? TrialEnumerator::static_order(n_max)
                                 : TrialEnumerator::ber_order(n_max, w,
                                                              strategy.post_decoder_ber);

    BitVec working = outcome.bits;
    std::vector<int> ranks;
    std::vector<std::size_t> positions;
    std::uint64_t used = 0;
    while (trials.next(ranks)) {
        ++used;
        positions.clear();
        for (int j : ranks) positions.push_back(ranked.position_of_rank(j));
        for (std::size_t p : positions) working[p] ^= 1;
        const bool ok = cache.verify_cached(working, positions);
        if (ok) {
            outcome.kind = SidResultKind::Corrected;
            outcome.trials_used = used;
            outcome.flipped_positions = positions;
            outcome.max_flip_rank = ranks.back();
            outcome.bits = working;
            outcome.tag_recomputations = cache.recomputations();
            outcome.tag_comparisons = cache.comparisons();
            return outcome;
        }
        for (std::size_t p : positions) working[p] ^= 1;  // restore the hard decision
    }

    outcome.kind = SidResultKind::Failed;
    outcome.trials_used = used;
    outcome.tag_recomputations = cache.recomputations();
    outcome.tag_comparisons = cache.comparisons();
    return outcome;
}

Classification classify(SidOutcome& outcome, std::span<const std::uint8_t> decoded_bits_after_sid,
                        std::span<const std::uint8_t> original_bits) {
    const bool verified = outcome.kind != SidResultKind::Failed;
    if (!verified) return Classification::Incorrect;
    const bool equal = decoded_bits_after_sid.size() == original_bits.size() &&
                       std::equal(decoded_bits_after_sid.begin(), decoded_bits_after_sid.end(),
                                  original_bits.begin());
    if (equal) return Classification::Correct;
    outcome.is_collision = true;
    return Classification::Collision;
}

}  // namespace sid
