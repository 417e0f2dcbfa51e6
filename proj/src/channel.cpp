#include "sid/channel.hpp"

#include <stdexcept>

namespace sid {

void ChannelParams::validate() const {
    if (!(code_rate > 0.0) || code_rate > 1.0)
        throw std::invalid_argument("ChannelParams: code_rate must be in (0, 1]");
}

std::vector<double> modulate_bpsk(std::span<const std::uint8_t> bits) {
    std::vector<double> symbols(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) symbols[i] = (bits[i] & 1) ? -1.0 : 1.0;
    return symbols;
}

std::vector<double> add_awgn(std::span<const double> symbols, const ChannelParams& params,
                             std::uint64_t stream_id) {
    params.validate();
    const double sigma = std::sqrt(params.noise_variance());
    StreamRng rng(params.seed, {stream_id});
    std::vector<double> out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = symbols[i] + sigma * rng.gaussian();
    return out;
}

std::vector<double> to_channel_llr(std::span<const double> received,
                                   const ChannelParams& params) {
    params.validate();
    const double lc = params.channel_reliability();
    std::vector<double> llrs(received.size());
    for (std::size_t i = 0; i < received.size(); ++i) llrs[i] = lc * received[i];
    return llrs;
}

double snr_db_from_ebn0_db(double ebn0_db, double code_rate) {
    return ebn0_db + 10.0 * std::log10(code_rate);
}

}  // namespace sid
