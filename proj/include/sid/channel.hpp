#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sid/bits.hpp"
#include "sid/rng.hpp"

namespace sid {

// BPSK over AWGN with symbol energy 1. Noise variance follows from the
// energy per information bit: sigma^2 = 1 / (2 * rate * 10^(ebn0_db/10)).
struct ChannelParams {
    double ebn0_db = 0.0;
    double code_rate = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
    double noise_variance() const {
        return 1.0 / (2.0 * code_rate * std::pow(10.0, ebn0_db / 10.0));
    }
    // L_c = 2 / sigma^2; multiplies received symbols into channel L-values.
    // Capped so a noiseless override (sigma = 0) yields finite L-values.
    double channel_reliability() const {
        const double variance = noise_variance();
        return variance > 2.0e-12 ? 2.0 / variance : 1.0e12;
    }
};

// bit 0 -> +1.0, bit 1 -> -1.0
std::vector<double> modulate_bpsk(std::span<const std::uint8_t> bits);

// y_i = x_i + n_i. The noise stream is a pure function of
// (params.seed, stream_id), independent of thread scheduling.
std::vector<double> add_awgn(std::span<const double> symbols, const ChannelParams& params,
                             std::uint64_t stream_id);

std::vector<double> to_channel_llr(std::span<const double> received, const ChannelParams& params);

// Exact Eb/N0 -> per-symbol S/N conversion (10*log10 of the rate).
double snr_db_from_ebn0_db(double ebn0_db, double code_rate);

}  // namespace sid
