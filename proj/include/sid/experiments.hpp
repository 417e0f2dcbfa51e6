#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sid/analytics.hpp"
#include "sid/crypto_check.hpp"
#include "sid/sid_engine.hpp"

namespace sid::experiments {

enum class CodeKind { Conv, Turbo };

// Everything a run depends on. Results are a pure function of this struct;
// worker count and call order never change them.
struct ExperimentConfig {
    Scenario scenario = Scenario::MessageWithTag;
    int message_len = 192;
    int tag_len = 128;
    CodeKind code = CodeKind::Conv;
    double ebn0_start_db = 1.5;
    double ebn0_stop_db = 5.0;
    double ebn0_step_db = 0.5;
    int n_max = 16;
    SidStrategy strategy{};
    long blocks = 2000;
    long trials = 10000;  // synthetic flip trials for the timing report
    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<std::uint8_t> key = std::vector<std::uint8_t>(16, 0x2a);

    int width() const { return message_len + tag_len; }
    double code_rate() const { return code == CodeKind::Conv ? 0.5 : 1.0 / 3.0; }
    std::vector<double> ebn0_points() const;
    void validate() const;
};

// Raw per-sweep-point tallies every report is built from.
struct PointStats {
    double ebn0_db = 0.0;
    long blocks = 0;
    long first_try_correct = 0;
    long corrected = 0;  // flip-corrected, verified and equal to the original
    long failed = 0;
    long collisions = 0;
    long no_sid_incorrect = 0;
    long sid_incorrect = 0;
    std::vector<long> corrected_by_rank;  // index j = 1..n_max
    std::uint64_t total_trials = 0;
    double wall_seconds = 0.0;
};

std::vector<PointStats> run_points(const ExperimentConfig& config);

struct CcerRecord {
    double ebn0_db = 0.0;
    long blocks = 0;
    double ccer_no_sid = 0.0;
    double ccer_sid = 0.0;
    double correct_fraction_sid = 0.0;  // 1 - ccer_sid
    long collisions = 0;
    double wall_seconds = 0.0;
};

std::vector<CcerRecord> run_ccer_sweep(const ExperimentConfig& config);

struct HistogramResult {
    analytics::CorrectionHistogram hist;  // fractions over flip-corrected blocks
    std::vector<long> counts;             // counts[x-1] for x = 1..n_max
    long blocks_total = 0;
    long first_try_correct = 0;
    long corrected = 0;
    double wall_seconds = 0.0;
};

// Single-point run (start must equal stop).
HistogramResult run_histogram(const ExperimentConfig& config);

struct LvaluesRecord {
    double ebn0_db = 0.0;
    int needed_lvalues = 0;
    bool unreached = false;  // target not met within n_max
};

std::vector<LvaluesRecord> run_lvalues_for_target(const ExperimentConfig& config, double target);

// Synthetic uniform single-bit flips against one block, comparing the cached
// verification path against the plain one while counting tag work.
struct TimingReport {
    long trials = 0;
    long recomputations = 0;
    long comparisons = 0;
    double recompute_ratio = 0.0;
    double expected_ratio = 0.0;  // m / (m + n)
    long disagreements = 0;       // verify_cached vs verify (always 0)
    double seconds_total = 0.0;
    double seconds_per_verification = 0.0;
};

TimingReport timing_report(const ExperimentConfig& config);

// CSV serializations. Volatile columns (wall time) are left out so identical
// configs always produce identical bytes.
std::string to_csv(const std::vector<CcerRecord>& records);
std::string to_csv(const HistogramResult& result);
std::string to_csv(const std::vector<LvaluesRecord>& records);
std::string to_csv(const TimingReport& report);

std::string to_json(const ExperimentConfig& config, const std::vector<CcerRecord>& records);
std::string to_json(const ExperimentConfig& config, const HistogramResult& result);
std::string to_json(const ExperimentConfig& config, const std::vector<LvaluesRecord>& records,
                    double target);
std::string to_json(const ExperimentConfig& config, const TimingReport& report);

// Rebuilds a histogram from its CSV form (columns x,count,fraction).
analytics::CorrectionHistogram histogram_from_csv(std::istream& in);

}  // namespace sid::experiments
