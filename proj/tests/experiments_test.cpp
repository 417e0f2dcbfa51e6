#include "sid/experiments.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"

using namespace sid;
using namespace sid::experiments;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig config;
    config.message_len = 24;
    config.tag_len = 40;
    config.ebn0_start_db = 3.0;
    config.ebn0_stop_db = 4.0;
    config.ebn0_step_db = 1.0;
    config.n_max = 8;
    config.blocks = 30;
    config.seed = 5;
    return config;
}

}  // namespace

TEST_CASE("sweep points are inclusive of the endpoint") {
    ExperimentConfig config = tiny_config();
    config.ebn0_start_db = 1.0;
    config.ebn0_stop_db = 2.0;
    config.ebn0_step_db = 0.5;
    CHECK(config.ebn0_points() == std::vector<double>{1.0, 1.5, 2.0});
}

TEST_CASE("config validation rejects inconsistent settings") {
    ExperimentConfig config = tiny_config();
    config.blocks = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = tiny_config();
    config.ebn0_step_db = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = tiny_config();
    config.n_max = 70;  // > width
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = tiny_config();
    config.scenario = Scenario::DetachedSignature;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // message_len != 0

    config = tiny_config();
    config.strategy.kind = StrategyKind::BerBased;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // missing BER
}

TEST_CASE("noiseless runs verify every block on the first try") {
    ExperimentConfig config = tiny_config();
    config.ebn0_start_db = config.ebn0_stop_db = 10000.0;
    config.blocks = 10;
    const auto records = run_ccer_sweep(config);
    REQUIRE(records.size() == 1);
    CHECK(records[0].ccer_no_sid == 0.0);
    CHECK(records[0].ccer_sid == 0.0);
    CHECK(records[0].collisions == 0);

    config.ebn0_start_db = config.ebn0_stop_db = 10000.0;
    const auto hist = run_histogram(config);
    CHECK(hist.corrected == 0);
    CHECK(hist.first_try_correct == 10);
    for (double f : hist.hist.fraction) CHECK(f == 0.0);
}

TEST_CASE("identical configs produce byte-identical CSV") {
    const ExperimentConfig config = tiny_config();
    const auto a = to_csv(run_ccer_sweep(config));
    const auto b = to_csv(run_ccer_sweep(config));
    CHECK(a == b);
}

TEST_CASE("results are independent of the worker count") {
    ExperimentConfig config = tiny_config();
    config.blocks = 40;
    const auto serial = to_csv(run_ccer_sweep(config));
    config.threads = 3;
    const auto parallel = to_csv(run_ccer_sweep(config));
    CHECK(serial == parallel);
}

TEST_CASE("golden CSV for a pinned tiny run") {
    const std::string expected =
        "ebn0_db,blocks,ccer_no_sid,ccer_sid,correct_fraction_sid,collisions\n"
        "3,30,0.03333333333,0,1,0\n"
        "4,30,0,0,1,0\n";
    CHECK(to_csv(run_ccer_sweep(tiny_config())) == expected);
}

TEST_CASE("complement column and pairing hold on every record") {
    ExperimentConfig config = tiny_config();
    config.ebn0_start_db = 2.0;
    config.ebn0_stop_db = 4.0;
    config.ebn0_step_db = 0.5;
    config.blocks = 60;
    for (const CcerRecord& r : run_ccer_sweep(config)) {
        CHECK(std::abs(r.correct_fraction_sid - (1.0 - r.ccer_sid)) < 1e-15);
        CHECK(r.ccer_sid <= r.ccer_no_sid);
        CHECK(r.ccer_no_sid >= 0.0);
        CHECK(r.ccer_no_sid <= 1.0);
    }
}

TEST_CASE("histogram fractions are counts over flip-corrected blocks") {
    ExperimentConfig config = tiny_config();
    config.ebn0_start_db = config.ebn0_stop_db = 3.0;
    config.blocks = 200;
    const HistogramResult result = run_histogram(config);
    REQUIRE(result.counts.size() == static_cast<std::size_t>(config.n_max));

    long total = 0;
    double fraction_sum = 0.0;
    for (std::size_t i = 0; i < result.counts.size(); ++i) {
        total += result.counts[i];
        fraction_sum += result.hist.fraction[i];
        if (result.corrected > 0)
            CHECK(result.hist.fraction[i] ==
                  doctest::Approx(static_cast<double>(result.counts[i]) /
                                  static_cast<double>(result.corrected))
                      .epsilon(1e-12));
    }
    CHECK(total == result.corrected);
    CHECK(fraction_sum <= 1.0 + 1e-12);
    CHECK(result.hist.blocks == result.corrected);
}

TEST_CASE("histogram CSV round trip feeds the fit") {
    ExperimentConfig config = tiny_config();
    config.message_len = 160;
    config.tag_len = 160;
    config.ebn0_start_db = config.ebn0_stop_db = 3.0;
    config.n_max = 16;
    config.blocks = 600;
    config.seed = 17;
    const HistogramResult result = run_histogram(config);

    std::istringstream csv(to_csv(result));
    const auto parsed = experiments::histogram_from_csv(csv);
    CHECK(parsed.blocks == result.corrected);
    REQUIRE(parsed.fraction.size() == result.hist.fraction.size());
    for (std::size_t i = 0; i < parsed.fraction.size(); ++i)
        CHECK(parsed.fraction[i] == doctest::Approx(result.hist.fraction[i]).epsilon(1e-9));

    // Monte Carlo decay rate lands in the fitted neighbourhood of the model.
    const auto fit = analytics::fit_exponential(parsed);
    CHECK(fit.a > 0.1);
    CHECK(fit.a < 0.45);
}

TEST_CASE("needed L-values per sweep point") {
    ExperimentConfig config = tiny_config();
    config.ebn0_start_db = 2.5;
    config.ebn0_stop_db = 4.5;
    config.ebn0_step_db = 1.0;
    config.blocks = 150;

    SUBCASE("target zero needs nothing") {
        for (const LvaluesRecord& r : run_lvalues_for_target(config, 0.0)) {
            CHECK(r.needed_lvalues == 0);
            CHECK_FALSE(r.unreached);
        }
    }
    SUBCASE("nonincreasing in Eb/N0 and flagged when out of reach") {
        const auto records = run_lvalues_for_target(config, 0.95);
        REQUIRE(records.size() == 3);
        int prev = config.n_max + 1;
        for (const LvaluesRecord& r : records) {
            CHECK(r.needed_lvalues <= prev);
            prev = r.needed_lvalues;
            if (r.unreached) CHECK(r.needed_lvalues == config.n_max);
        }
    }
}

TEST_CASE("timing report ratios") {
    SUBCASE("uniform flips split by the message share") {
        ExperimentConfig config = tiny_config();
        config.message_len = 192;
        config.tag_len = 128;
        config.trials = 10000;
        const TimingReport report = timing_report(config);
        CHECK(report.trials == 10000);
        CHECK(report.recomputations + report.comparisons == report.trials);
        CHECK(report.expected_ratio == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(report.recompute_ratio == doctest::Approx(0.6).epsilon(0.10));
        CHECK(report.disagreements == 0);
        CHECK(report.seconds_per_verification > 0.0);
    }
    SUBCASE("detached blocks never recompute") {
        ExperimentConfig config = tiny_config();
        config.scenario = Scenario::DetachedSignature;
        config.message_len = 0;
        config.tag_len = 320;
        config.trials = 2000;
        const TimingReport report = timing_report(config);
        CHECK(report.recomputations == 0);
        CHECK(report.comparisons == 2000);
        CHECK(report.expected_ratio == 0.0);
        CHECK(report.disagreements == 0);
    }
}

TEST_CASE("detached and recovery scenarios run end to end") {
    ExperimentConfig config = tiny_config();
    config.scenario = Scenario::DetachedSignature;
    config.message_len = 0;
    config.tag_len = 64;
    config.ebn0_start_db = config.ebn0_stop_db = 4.0;
    config.blocks = 50;
    const auto detached = run_ccer_sweep(config);
    CHECK(detached[0].ccer_sid <= detached[0].ccer_no_sid);

    config = tiny_config();
    config.scenario = Scenario::Recovery;
    config.ebn0_start_db = config.ebn0_stop_db = 4.0;
    config.blocks = 50;
    const auto recovery = run_ccer_sweep(config);
    CHECK(recovery[0].ccer_sid <= recovery[0].ccer_no_sid);
}

TEST_CASE("JSON reports carry the config and the records") {
    ExperimentConfig config = tiny_config();
    config.blocks = 10;
    config.ebn0_start_db = config.ebn0_stop_db = 6.0;
    const auto json = to_json(config, run_ccer_sweep(config));
    CHECK(json.find("\"records\"") != std::string::npos);
    CHECK(json.find("\"seed\": 5") != std::string::npos);
    CHECK(json.find("\"w\": 64") != std::string::npos);
    CHECK(json.find("wall_seconds") != std::string::npos);
}
