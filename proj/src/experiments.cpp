#include "sid/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "sid/channel.hpp"
#include "sid/conv_code.hpp"
#include "sid/rng.hpp"
#include "sid/turbo_code.hpp"

namespace sid::experiments {

namespace {

// Reference message length for detached-signature runs; the block itself is
// only the check value, the message is assumed already delivered intact.
constexpr std::size_t kDetachedMessageBits = 256;

// Substream tags for deriving independent randomness per block.
constexpr std::uint64_t kMessageStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

std::uint64_t noise_stream_id(int sweep_index, long block_index) {
    return (static_cast<std::uint64_t>(static_cast<unsigned>(sweep_index)) << 44) ^
           (static_cast<std::uint64_t>(block_index) << 4) ^ kNoiseStream;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

struct BlockResult {
    SidResultKind kind = SidResultKind::Failed;
    bool collision = false;
    int max_rank = 0;
    std::uint64_t trials = 0;
};

BlockResult simulate_block(const ExperimentConfig& config, double ebn0_db, int sweep_index,
                           long block_index) {
    StreamRng message_rng(config.seed, {kMessageStream, static_cast<std::uint64_t>(sweep_index),
                                        static_cast<std::uint64_t>(block_index)});
    const std::size_t message_bits = config.scenario == Scenario::DetachedSignature
                                         ? kDetachedMessageBits
                                         : static_cast<std::size_t>(config.message_len);
    const BitVec message = message_rng.bits(message_bits);

    const CheckScheme scheme{config.key, config.tag_len};
    const SidBlock block = build_sid_block(config.scenario, message, scheme);

    BitVec coded;
    ConvCodeSpec conv_spec;
    TurboSpec turbo_spec;
    if (config.code == CodeKind::Conv) {
        coded = conv_encode(block.bits, conv_spec);
    } else {
        coded = turbo_encode(block.bits, turbo_spec);
    }

    ChannelParams params{ebn0_db, config.code_rate(), config.seed};
    const auto symbols = modulate_bpsk(coded);
    const auto received = add_awgn(symbols, params, noise_stream_id(sweep_index, block_index));
    const auto channel_llrs = to_channel_llr(received, params);

    const std::vector<double> llrs = config.code == CodeKind::Conv
                                         ? bcjr_decode(channel_llrs, conv_spec)
                                         : turbo_decode(channel_llrs, turbo_spec);

    const BlockLayout layout{config.scenario, block.message_len, block.tag_len};
    const std::span<const std::uint8_t> reference =
        config.scenario == Scenario::DetachedSignature ? std::span<const std::uint8_t>(message)
                                                       : std::span<const std::uint8_t>();
    SidOutcome outcome =
        soft_input_decrypt(llrs, layout, scheme, config.strategy, config.n_max, reference);
    classify(outcome, outcome.bits, block.bits);

    return {outcome.kind, outcome.is_collision, outcome.max_flip_rank, outcome.trials_used};
}

PointStats reduce_point(const ExperimentConfig& config, double ebn0_db,
                        const std::vector<BlockResult>& results, double wall_seconds) {
    PointStats stats;
    stats.ebn0_db = ebn0_db;
    stats.blocks = static_cast<long>(results.size());
    stats.corrected_by_rank.assign(static_cast<std::size_t>(config.n_max) + 1, 0);
    stats.wall_seconds = wall_seconds;
    for (const BlockResult& r : results) {
        stats.total_trials += r.trials;
        if (r.collision) ++stats.collisions;
        const bool sid_correct = r.kind != SidResultKind::Failed && !r.collision;
        const bool no_sid_correct = r.kind == SidResultKind::VerifiedFirstTry && !r.collision;
        if (!sid_correct) ++stats.sid_incorrect;
        if (!no_sid_correct) ++stats.no_sid_incorrect;
        switch (r.kind) {
            case SidResultKind::VerifiedFirstTry:
                if (!r.collision) ++stats.first_try_correct;
                break;
            case SidResultKind::Corrected:
                if (!r.collision) {
                    ++stats.corrected;
                    ++stats.corrected_by_rank[static_cast<std::size_t>(r.max_rank)];
                }
                break;
            case SidResultKind::Failed:
                ++stats.failed;
                break;
        }
    }
    return stats;
}

}  // namespace

std::vector<double> ExperimentConfig::ebn0_points() const {
    std::vector<double> points;
    for (int i = 0;; ++i) {
        const double v = ebn0_start_db + i * ebn0_step_db;
        if (v > ebn0_stop_db + 1e-9) break;
        points.push_back(v);
    }
    return points;
}

void ExperimentConfig::validate() const {
    if (scenario == Scenario::DetachedSignature) {
        if (message_len != 0)
            throw std::invalid_argument("config: detached signature requires message_len = 0");
    } else if (message_len < 1) {
        throw std::invalid_argument("config: message_len must be >= 1");
    }
    CheckScheme{key, tag_len}.validate();
    if (ebn0_step_db <= 0.0) throw std::invalid_argument("config: ebn0 step must be > 0");
    if (ebn0_stop_db < ebn0_start_db - 1e-9)
        throw std::invalid_argument("config: ebn0 stop must be >= start");
    if (blocks < 1) throw std::invalid_argument("config: blocks must be >= 1");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (n_max < 1 || n_max > width() || n_max > 24)
        throw std::invalid_argument("config: n_max must be in [1, min(w, 24)]");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    if (strategy.kind == StrategyKind::BerBased &&
        !(strategy.post_decoder_ber > 0.0 && strategy.post_decoder_ber < 1.0))
        throw std::invalid_argument("config: ber strategy needs post-decoder BER in (0, 1)");
}

std::vector<PointStats> run_points(const ExperimentConfig& config) {
    config.validate();
    std::vector<PointStats> out;
    const auto points = config.ebn0_points();
    for (int sweep_index = 0; sweep_index < static_cast<int>(points.size()); ++sweep_index) {
        const double ebn0_db = points[static_cast<std::size_t>(sweep_index)];
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<BlockResult> results(static_cast<std::size_t>(config.blocks));

        const int workers = static_cast<int>(
            std::min<long>(config.threads, config.blocks));
        if (workers <= 1) {
            for (long b = 0; b < config.blocks; ++b)
                results[static_cast<std::size_t>(b)] =
                    simulate_block(config, ebn0_db, sweep_index, b);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int t = 0; t < workers; ++t) {
                pool.emplace_back([&, t] {
                    for (long b = t; b < config.blocks; b += workers)
                        results[static_cast<std::size_t>(b)] =
                            simulate_block(config, ebn0_db, sweep_index, b);
                });
            }
            for (auto& th : pool) th.join();
        }

        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        out.push_back(reduce_point(config, ebn0_db, results, dt.count()));
    }
    return out;
}

std::vector<CcerRecord> run_ccer_sweep(const ExperimentConfig& config) {
    std::vector<CcerRecord> records;
    for (const PointStats& s : run_points(config)) {
        CcerRecord r;
        r.ebn0_db = s.ebn0_db;
        r.blocks = s.blocks;
        r.ccer_no_sid = static_cast<double>(s.no_sid_incorrect) / static_cast<double>(s.blocks);
        r.ccer_sid = static_cast<double>(s.sid_incorrect) / static_cast<double>(s.blocks);
        r.correct_fraction_sid = 1.0 - r.ccer_sid;
        r.collisions = s.collisions;
        r.wall_seconds = s.wall_seconds;
        records.push_back(r);
    }
    return records;
}

HistogramResult run_histogram(const ExperimentConfig& config) {
    if (std::abs(config.ebn0_stop_db - config.ebn0_start_db) > 1e-9)
        throw std::invalid_argument("run_histogram: needs a single Eb/N0 point");
    const PointStats s = run_points(config).front();

    HistogramResult result;
    result.blocks_total = s.blocks;
    result.first_try_correct = s.first_try_correct;
    result.corrected = s.corrected;
    result.wall_seconds = s.wall_seconds;
    result.counts.assign(static_cast<std::size_t>(config.n_max), 0);
    for (int x = 1; x <= config.n_max; ++x)
        result.counts[static_cast<std::size_t>(x - 1)] =
            s.corrected_by_rank[static_cast<std::size_t>(x)];

    result.hist.w = config.width();
    result.hist.ebn0_db = s.ebn0_db;
    result.hist.blocks = s.corrected;
    result.hist.fraction.assign(static_cast<std::size_t>(config.n_max), 0.0);
    if (s.corrected > 0) {
        for (int x = 1; x <= config.n_max; ++x)
            result.hist.fraction[static_cast<std::size_t>(x - 1)] =
                static_cast<double>(result.counts[static_cast<std::size_t>(x - 1)]) /
                static_cast<double>(s.corrected);
    }
    return result;
}

std::vector<LvaluesRecord> run_lvalues_for_target(const ExperimentConfig& config, double target) {
    if (!(target >= 0.0) || !(target < 1.0))
        throw std::invalid_argument("run_lvalues_for_target: target must be in [0, 1)");
    std::vector<LvaluesRecord> records;
    for (const PointStats& s : run_points(config)) {
        LvaluesRecord r;
        r.ebn0_db = s.ebn0_db;
        const double goal = target * static_cast<double>(s.blocks);
        double reached = static_cast<double>(s.first_try_correct);
        int x = 0;
        while (reached < goal && x < config.n_max) {
            ++x;
            reached += static_cast<double>(s.corrected_by_rank[static_cast<std::size_t>(x)]);
        }
        r.needed_lvalues = x;
        r.unreached = reached < goal;
        records.push_back(r);
    }
    return records;
}

TimingReport timing_report(const ExperimentConfig& config) {
    config.validate();
    StreamRng rng(config.seed, {kMessageStream});
    const std::size_t message_bits = config.scenario == Scenario::DetachedSignature
                                         ? kDetachedMessageBits
                                         : static_cast<std::size_t>(config.message_len);
    const BitVec message = rng.bits(message_bits);
    const CheckScheme scheme{config.key, config.tag_len};
    const SidBlock block = build_sid_block(config.scenario, message, scheme);
    const std::size_t w = static_cast<std::size_t>(block.width());

    const std::span<const std::uint8_t> reference =
        config.scenario == Scenario::DetachedSignature ? std::span<const std::uint8_t>(message)
                                                       : std::span<const std::uint8_t>();
    VerifyCacheState cache(block, scheme, reference);

    TimingReport report;
    report.trials = config.trials;
    report.expected_ratio =
        static_cast<double>(block.message_len) / static_cast<double>(block.width());

    BitVec working = block.bits;
    const auto t0 = std::chrono::steady_clock::now();
    for (long t = 0; t < config.trials; ++t) {
        const std::size_t pos = static_cast<std::size_t>(rng.below(w));
        working[pos] ^= 1;
        const std::size_t flips[] = {pos};
        const bool cached_ok = cache.verify_cached(working, flips);
        SidBlock trial{working, block.layout, block.message_len, block.tag_len};
        const bool plain_ok = verify(trial, scheme, reference).ok;
        if (cached_ok != plain_ok) ++report.disagreements;
        working[pos] ^= 1;
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

    report.recomputations = cache.recomputations();
    report.comparisons = cache.comparisons();
    report.recompute_ratio =
        static_cast<double>(report.recomputations) / static_cast<double>(report.trials);
    report.seconds_total = dt.count();
    // Each trial ran both the cached and the plain verification.
    report.seconds_per_verification = dt.count() / (2.0 * static_cast<double>(report.trials));
    return report;
}

std::string to_csv(const std::vector<CcerRecord>& records) {
    std::string out = "ebn0_db,blocks,ccer_no_sid,ccer_sid,correct_fraction_sid,collisions\n";
    for (const CcerRecord& r : records) {
        out += format_double(r.ebn0_db);
        out += ',' + std::to_string(r.blocks);
        out += ',' + format_double(r.ccer_no_sid);
        out += ',' + format_double(r.ccer_sid);
        out += ',' + format_double(r.correct_fraction_sid);
        out += ',' + std::to_string(r.collisions);
        out += '\n';
    }
    return out;
}

std::string to_csv(const HistogramResult& result) {
    std::string out = "x,count,fraction\n";
    for (std::size_t i = 0; i < result.counts.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',' + std::to_string(result.counts[i]);
        out += ',' + format_double(result.hist.fraction[i]);
        out += '\n';
    }
    return out;
}

std::string to_csv(const std::vector<LvaluesRecord>& records) {
    std::string out = "ebn0_db,needed_lvalues,unreached\n";
    for (const LvaluesRecord& r : records) {
        out += format_double(r.ebn0_db);
        out += ',' + std::to_string(r.needed_lvalues);
        out += ',' + std::to_string(r.unreached ? 1 : 0);
        out += '\n';
    }
    return out;
}

std::string to_csv(const TimingReport& report) {
    std::string out =
        "trials,recomputations,comparisons,recompute_ratio,expected_ratio,disagreements\n";
    out += std::to_string(report.trials);
    out += ',' + std::to_string(report.recomputations);
    out += ',' + std::to_string(report.comparisons);
    out += ',' + format_double(report.recompute_ratio);
    out += ',' + format_double(report.expected_ratio);
    out += ',' + std::to_string(report.disagreements);
    out += '\n';
    return out;
}

namespace {

nlohmann::json config_json(const ExperimentConfig& config) {
    const char* scenario = config.scenario == Scenario::Recovery ? "recovery"
                           : config.scenario == Scenario::DetachedSignature
                               ? "detached"
                               : "message_with_tag";
    return {
        {"scenario", scenario},
        {"w", config.width()},
        {"m", config.message_len},
        {"n", config.tag_len},
        {"code", config.code == CodeKind::Conv ? "conv" : "turbo"},
        {"ebn0_start_db", config.ebn0_start_db},
        {"ebn0_stop_db", config.ebn0_stop_db},
        {"ebn0_step_db", config.ebn0_step_db},
        {"nmax", config.n_max},
        {"strategy", config.strategy.kind == StrategyKind::Static ? "static" : "ber"},
        {"blocks", config.blocks},
        {"seed", config.seed},
    };
}

}  // namespace

std::string to_json(const ExperimentConfig& config, const std::vector<CcerRecord>& records) {
    nlohmann::json doc;
    doc["config"] = config_json(config);
    for (const CcerRecord& r : records) {
        doc["records"].push_back({{"ebn0_db", r.ebn0_db},
                                  {"blocks", r.blocks},
                                  {"ccer_no_sid", r.ccer_no_sid},
                                  {"ccer_sid", r.ccer_sid},
                                  {"correct_fraction_sid", r.correct_fraction_sid},
                                  {"collisions", r.collisions},
                                  {"wall_seconds", r.wall_seconds}});
    }
    if (records.empty()) doc["records"] = nlohmann::json::array();
    return doc.dump(2) + "\n";
}

std::string to_json(const ExperimentConfig& config, const HistogramResult& result) {
    nlohmann::json doc;
    doc["config"] = config_json(config);
    doc["blocks"] = result.blocks_total;
    doc["first_try_correct"] = result.first_try_correct;
    doc["corrected"] = result.corrected;
    doc["wall_seconds"] = result.wall_seconds;
    doc["counts"] = result.counts;
    doc["fractions"] = result.hist.fraction;
    return doc.dump(2) + "\n";
}

std::string to_json(const ExperimentConfig& config, const std::vector<LvaluesRecord>& records,
                    double target) {
    nlohmann::json doc;
    doc["config"] = config_json(config);
    doc["target"] = target;
    doc["records"] = nlohmann::json::array();
    for (const LvaluesRecord& r : records) {
        doc["records"].push_back({{"ebn0_db", r.ebn0_db},
                                  {"needed_lvalues", r.needed_lvalues},
                                  {"unreached", r.unreached}});
    }
    return doc.dump(2) + "\n";
}

std::string to_json(const ExperimentConfig& config, const TimingReport& report) {
    nlohmann::json doc;
    doc["config"] = config_json(config);
    doc["trials"] = report.trials;
    doc["recomputations"] = report.recomputations;
    doc["comparisons"] = report.comparisons;
    doc["recompute_ratio"] = report.recompute_ratio;
    doc["expected_ratio"] = report.expected_ratio;
    doc["disagreements"] = report.disagreements;
    doc["seconds_total"] = report.seconds_total;
    doc["seconds_per_verification"] = report.seconds_per_verification;
    return doc.dump(2) + "\n";
}

analytics::CorrectionHistogram histogram_from_csv(std::istream& in) {
    analytics::CorrectionHistogram hist;
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,count,fraction", 0) != 0)
        throw std::runtime_error("histogram CSV: unexpected header");
    long total = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        const std::size_t x = static_cast<std::size_t>(std::stoul(field));
        std::getline(row, field, ',');
        total += std::stol(field);
        std::getline(row, field, ',');
        const double fraction = std::stod(field);
        if (hist.fraction.size() < x) hist.fraction.resize(x, 0.0);
        hist.fraction[x - 1] = fraction;
    }
    hist.blocks = total;
    hist.w = static_cast<int>(hist.fraction.size());
    return hist;
}

}  // namespace sid::experiments
