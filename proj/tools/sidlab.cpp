// sidlab: soft-input decryption experiment driver.
//
// Subcommands: ccer, hist, lvalues, predict, minnmax, fit, timing.
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sid/analytics.hpp"
#include "sid/experiments.hpp"

namespace {

using sid::Scenario;
using sid::StrategyKind;
using sid::experiments::CodeKind;
using sid::experiments::ExperimentConfig;

struct CliOptions {
    ExperimentConfig config;
    std::string scenario = "message_with_tag";
    std::string code = "conv";
    std::string strategy = "static";
    std::string ebn0 = "1.5:5:0.5";
    std::string key_hex;
    int w = 0;  // optional cross-check against m + n
    double ber = 0.0;
    double target = 0.95;
    std::string out_path;
    std::string format = "csv";
    std::string coeffs_path;
    std::string in_path;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--scenario", opt.scenario, "Block layout")
        ->check(CLI::IsMember({"recovery", "detached", "message_with_tag"}));
    cmd->add_option("--w", opt.w, "Block width in bits (cross-checked against --m + --n)");
    cmd->add_option("--m", opt.config.message_len, "Message length in bits");
    cmd->add_option("--n", opt.config.tag_len, "Check-value length in bits");
    cmd->add_option("--code", opt.code, "Channel code")->check(CLI::IsMember({"conv", "turbo"}));
    cmd->add_option("--ebn0", opt.ebn0, "Eb/N0 sweep as start:stop:step dB (or one value)");
    cmd->add_option("--nmax", opt.config.n_max, "Highest number of least-reliable bits to flip");
    cmd->add_option("--strategy", opt.strategy, "Flip schedule")
        ->check(CLI::IsMember({"static", "ber"}));
    cmd->add_option("--ber", opt.ber, "Post-decoder BER (ber strategy, minnmax)");
    cmd->add_option("--blocks", opt.config.blocks, "Blocks per sweep point");
    cmd->add_option("--trials", opt.config.trials, "Flip trials for the timing report");
    cmd->add_option("--seed", opt.config.seed, "Base RNG seed");
    cmd->add_option("--threads", opt.config.threads, "Worker threads (results are identical)");
    cmd->add_option("--key", opt.key_hex, "Check-value key as hex (default 16 bytes of 2a)");
    cmd->add_option("--out", opt.out_path, "Output file (default stdout)");
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
    if (hex.empty() || hex.size() % 2 != 0)
        throw std::invalid_argument("--key: need an even number of hex digits");
    std::vector<std::uint8_t> bytes(hex.size() / 2);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const std::string byte = hex.substr(2 * i, 2);
        std::size_t used = 0;
        bytes[i] = static_cast<std::uint8_t>(std::stoul(byte, &used, 16));
        if (used != 2) throw std::invalid_argument("--key: invalid hex digit");
    }
    return bytes;
}

void parse_ebn0(const std::string& text, ExperimentConfig& config) {
    std::istringstream in(text);
    std::string field;
    std::vector<double> parts;
    while (std::getline(in, field, ':')) parts.push_back(std::stod(field));
    if (parts.size() == 1) {
        config.ebn0_start_db = config.ebn0_stop_db = parts[0];
        config.ebn0_step_db = 1.0;
    } else if (parts.size() == 3) {
        config.ebn0_start_db = parts[0];
        config.ebn0_stop_db = parts[1];
        config.ebn0_step_db = parts[2];
    } else {
        throw std::invalid_argument("--ebn0: expected one value or start:stop:step");
    }
}

ExperimentConfig resolve(CliOptions& opt) {
    ExperimentConfig& config = opt.config;
    if (opt.scenario == "recovery")
        config.scenario = Scenario::Recovery;
    else if (opt.scenario == "detached")
        config.scenario = Scenario::DetachedSignature;
    else
        config.scenario = Scenario::MessageWithTag;
    if (config.scenario == Scenario::DetachedSignature) config.message_len = 0;
    config.code = opt.code == "turbo" ? CodeKind::Turbo : CodeKind::Conv;
    config.strategy.kind = opt.strategy == "ber" ? StrategyKind::BerBased : StrategyKind::Static;
    config.strategy.post_decoder_ber = opt.ber;
    parse_ebn0(opt.ebn0, config);
    if (!opt.key_hex.empty()) config.key = parse_hex(opt.key_hex);
    if (opt.w != 0 && opt.w != config.width())
        throw std::invalid_argument("--w does not match --m + --n");
    config.validate();
    return config;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

sid::analytics::LinearCoeffs load_coeffs(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coefficients file: " + path);
    return sid::analytics::load_linear_coeffs(in);
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

int run_predict(CliOptions& opt) {
    const auto lin = load_coeffs(opt.coeffs_path);
    ExperimentConfig config;
    parse_ebn0(opt.ebn0, config);
    const int w = opt.w != 0 ? opt.w : 320;

    nlohmann::json records = nlohmann::json::array();
    std::string csv = "w,ebn0_db,snr_db,a,x0,x0_ceil,extrapolated,valid\n";
    for (double ebn0 : config.ebn0_points()) {
        const double snr = sid::analytics::snr_from_ebn0(ebn0);
        const auto p = sid::analytics::predict_x0(w, ebn0, opt.target, lin);
        csv += std::to_string(w) + ',' + format_g(ebn0) + ',' + format_g(snr) + ',' +
               format_g(p.a) + ',' + (p.valid ? format_g(p.x0) : std::string("nan")) + ',' +
               (p.valid ? std::to_string(p.x0_ceil) : std::string("nan")) + ',' +
               std::to_string(p.extrapolated ? 1 : 0) + ',' + std::to_string(p.valid ? 1 : 0) +
               '\n';
        records.push_back({{"w", w},
                           {"ebn0_db", ebn0},
                           {"snr_db", snr},
                           {"a", p.a},
                           {"x0", p.x0},
                           {"x0_ceil", p.x0_ceil},
                           {"extrapolated", p.extrapolated},
                           {"valid", p.valid}});
    }
    if (opt.format == "json") {
        nlohmann::json doc{{"target", opt.target}, {"records", records}};
        emit(doc.dump(2) + "\n", opt.out_path);
    } else {
        emit(csv, opt.out_path);
    }
    return 0;
}

int run_minnmax(CliOptions& opt) {
    const int w = opt.w != 0 ? opt.w : 320;
    const int result = sid::analytics::min_nmax(w, opt.ber, opt.target);
    if (opt.format == "json") {
        nlohmann::json doc{
            {"w", w}, {"ber", opt.ber}, {"target", opt.target}, {"min_nmax", result}};
        emit(doc.dump(2) + "\n", opt.out_path);
    } else {
        emit("w,ber,target,min_nmax\n" + std::to_string(w) + ',' + format_g(opt.ber) + ',' +
                 format_g(opt.target) + ',' + std::to_string(result) + '\n',
             opt.out_path);
    }
    return 0;
}

int run_fit(CliOptions& opt) {
    if (opt.in_path.empty()) throw std::invalid_argument("fit: --in histogram CSV is required");
    std::ifstream in(opt.in_path);
    if (!in) throw std::runtime_error("cannot open input file: " + opt.in_path);
    const auto hist = sid::experiments::histogram_from_csv(in);
    const auto fit = sid::analytics::fit_exponential(hist);
    if (opt.format == "json") {
        nlohmann::json doc{{"k", fit.k}, {"a", fit.a}, {"points_used", fit.points_used}};
        emit(doc.dump(2) + "\n", opt.out_path);
    } else {
        emit("k,a,points_used\n" + format_g(fit.k) + ',' + format_g(fit.a) + ',' +
                 std::to_string(fit.points_used) + '\n',
             opt.out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correction of cryptographically checked blocks from soft decoder output"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI config file");

    CliOptions opt;
    CLI::App* ccer = app.add_subcommand("ccer", "Check error rate sweep with and without correction");
    CLI::App* hist = app.add_subcommand("hist", "Correction histogram per reliability rank");
    CLI::App* lvalues =
        app.add_subcommand("lvalues", "L-values needed to reach a target correction fraction");
    CLI::App* predict =
        app.add_subcommand("predict", "Model-based L-value count prediction");
    CLI::App* minnmax =
        app.add_subcommand("minnmax", "Theoretical minimum flip budget from the error statistics");
    CLI::App* fit = app.add_subcommand("fit", "Fit k*exp(-a*x) to a histogram CSV");
    CLI::App* timing = app.add_subcommand("timing", "Verification cost report (cached vs full)");

    for (CLI::App* cmd : {ccer, hist, lvalues, timing}) add_common_options(cmd, opt);
    for (CLI::App* cmd : {lvalues, predict, minnmax}) {
        cmd->add_option("--target", opt.target, "Correction fraction to reach");
    }
    predict->add_option("--w", opt.w, "Block width in bits");
    predict->add_option("--ebn0", opt.ebn0, "Eb/N0 sweep as start:stop:step dB (or one value)");
    predict->add_option("--coeffs", opt.coeffs_path, "JSON file with KA..NC overrides");
    predict->add_option("--out", opt.out_path, "Output file (default stdout)");
    predict->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    minnmax->add_option("--w", opt.w, "Block width in bits");
    minnmax->add_option("--ber", opt.ber, "Post-decoder bit error rate")->required();
    minnmax->add_option("--out", opt.out_path, "Output file (default stdout)");
    minnmax->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    fit->add_option("--in", opt.in_path, "Histogram CSV produced by hist")->required();
    fit->add_option("--out", opt.out_path, "Output file (default stdout)");
    fit->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (predict->parsed()) return run_predict(opt);
        if (minnmax->parsed()) return run_minnmax(opt);
        if (fit->parsed()) return run_fit(opt);

        const ExperimentConfig config = resolve(opt);
        const bool json = opt.format == "json";
        if (ccer->parsed()) {
            const auto records = sid::experiments::run_ccer_sweep(config);
            emit(json ? sid::experiments::to_json(config, records)
                      : sid::experiments::to_csv(records),
                 opt.out_path);
        } else if (hist->parsed()) {
            const auto result = sid::experiments::run_histogram(config);
            emit(json ? sid::experiments::to_json(config, result)
                      : sid::experiments::to_csv(result),
                 opt.out_path);
        } else if (lvalues->parsed()) {
            const auto records = sid::experiments::run_lvalues_for_target(config, opt.target);
            emit(json ? sid::experiments::to_json(config, records, opt.target)
                      : sid::experiments::to_csv(records),
                 opt.out_path);
        } else if (timing->parsed()) {
            const auto report = sid::experiments::timing_report(config);
            emit(json ? sid::experiments::to_json(config, report)
                      : sid::experiments::to_csv(report),
                 opt.out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
