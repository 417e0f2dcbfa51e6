#include "sid/conv_code.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sid {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint8_t parity(unsigned v) { return static_cast<std::uint8_t>(std::popcount(v) & 1); }

// Branch metric contribution of one coded bit: +L/2 for bit 0, -L/2 for bit 1.
inline double bit_metric(double llr, std::uint8_t bit) { return bit ? -0.5 * llr : 0.5 * llr; }

}  // namespace

void ConvCodeSpec::validate() const {
    if (memory < 1) throw std::invalid_argument("ConvCodeSpec: memory must be >= 1");
    const unsigned width = static_cast<unsigned>(memory) + 1;
    for (unsigned g : generators) {
        if (g == 0 || (g >> width) != 0)
            throw std::invalid_argument("ConvCodeSpec: generator mask must fit in memory+1 bits");
    }
}

Trellis::Trellis(int memory, bool recursive, const ConvCodeSpec& spec)
    : memory_(memory), num_states_(1 << memory) {
    branches_.resize(static_cast<std::size_t>(2 * num_states_));
    tail_input_.resize(static_cast<std::size_t>(num_states_));
    // Register layout: state bit (m-1) holds the most recent register bit.
    for (int s = 0; s < num_states_; ++s) {
        for (int u = 0; u <= 1; ++u) {
            Branch& b = branches_[static_cast<std::size_t>(2 * s + u)];
            if (!recursive) {
                const unsigned window =
                    (static_cast<unsigned>(u) << memory) | static_cast<unsigned>(s);
                b.out = {parity(window & spec.generators[0]), parity(window & spec.generators[1])};
                b.next_state = static_cast<int>((static_cast<unsigned>(u) << (memory - 1)) |
                                                (static_cast<unsigned>(s) >> 1));
            } else {
                // Feedback taps on the state only; the input tap is implicit.
                const std::uint8_t fb = parity(static_cast<unsigned>(s) & spec.generators[0]);
                const std::uint8_t d = static_cast<std::uint8_t>(u) ^ fb;
                const unsigned window =
                    (static_cast<unsigned>(d) << memory) | static_cast<unsigned>(s);
                b.out = {static_cast<std::uint8_t>(u), parity(window & spec.generators[1])};
                b.next_state = static_cast<int>((static_cast<unsigned>(d) << (memory - 1)) |
                                                (static_cast<unsigned>(s) >> 1));
            }
        }
        // Termination drives the register input to zero each step.
        tail_input_[static_cast<std::size_t>(s)] =
            recursive ? parity(static_cast<unsigned>(s) & spec.generators[0]) : 0;
    }
}

Trellis Trellis::feedforward(const ConvCodeSpec& spec) {
    spec.validate();
    return Trellis(spec.memory, false, spec);
}

Trellis Trellis::recursive_systematic(const ConvCodeSpec& spec) {
    spec.validate();
    return Trellis(spec.memory, true, spec);
}

BitVec conv_encode(std::span<const std::uint8_t> info_bits, const ConvCodeSpec& spec) {
    spec.validate();
    if (info_bits.empty()) throw std::invalid_argument("conv_encode: empty input");

    const int m = spec.memory;
    BitVec out;
    out.reserve(2 * (info_bits.size() + static_cast<std::size_t>(spec.terminated ? m : 0)));

    unsigned state = 0;
    auto step = [&](std::uint8_t u) {
        const unsigned window = (static_cast<unsigned>(u) << m) | state;
        out.push_back(parity(window & spec.generators[0]));
        out.push_back(parity(window & spec.generators[1]));
        state = (static_cast<unsigned>(u) << (m - 1)) | (state >> 1);
    };

    for (std::uint8_t u : info_bits) step(u & 1);
    if (spec.terminated)
        for (int i = 0; i < m; ++i) step(0);
    return out;
}

double max_star(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = a > b ? a : b;
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

std::vector<double> trellis_bcjr(const Trellis& trellis, std::span<const double> channel_llrs,
                                 std::span<const double> apriori, int info_steps, int tail_steps,
                                 bool terminated_end) {
    const int steps = info_steps + tail_steps;
    if (channel_llrs.size() != static_cast<std::size_t>(2 * steps))
        throw std::invalid_argument("trellis_bcjr: channel LLR length mismatch");
    if (!apriori.empty() && apriori.size() != static_cast<std::size_t>(info_steps))
        throw std::invalid_argument("trellis_bcjr: a-priori length mismatch");

    const int ns = trellis.num_states();

    // gamma[t][2s+u], -inf marks branches excluded by termination.
    std::vector<double> gamma(static_cast<std::size_t>(steps) * 2 * ns, kNegInf);
    for (int t = 0; t < steps; ++t) {
        const double l0 = channel_llrs[static_cast<std::size_t>(2 * t)];
        const double l1 = channel_llrs[static_cast<std::size_t>(2 * t + 1)];
        const double la = (t < info_steps && !apriori.empty())
                              ? apriori[static_cast<std::size_t>(t)]
                              : 0.0;
        for (int s = 0; s < ns; ++s) {
            for (int u = 0; u <= 1; ++u) {
                if (t >= info_steps && u != trellis.termination_input(s)) continue;
                const auto& b = trellis.branch(s, u);
                gamma[(static_cast<std::size_t>(t) * ns + s) * 2 + u] =
                    bit_metric(l0, b.out[0]) + bit_metric(l1, b.out[1]) +
                    bit_metric(la, static_cast<std::uint8_t>(u));
            }
        }
    }

    auto normalize = [ns](std::span<double> v) {
        double hi = kNegInf;
        for (double x : v) hi = x > hi ? x : hi;
        if (hi != kNegInf)
            for (int s = 0; s < ns; ++s) v[static_cast<std::size_t>(s)] -= hi;
    };

    std::vector<double> alpha(static_cast<std::size_t>(steps + 1) * ns, kNegInf);
    alpha[0] = 0.0;  // encoder starts in the all-zero state
    for (int t = 0; t < steps; ++t) {
        auto* prev = &alpha[static_cast<std::size_t>(t) * ns];
        auto* next = &alpha[static_cast<std::size_t>(t + 1) * ns];
        for (int s = 0; s < ns; ++s) {
            if (prev[s] == kNegInf) continue;
            for (int u = 0; u <= 1; ++u) {
                const double g = gamma[(static_cast<std::size_t>(t) * ns + s) * 2 + u];
                if (g == kNegInf) continue;
                double& dst = next[trellis.branch(s, u).next_state];
                dst = max_star(dst, prev[s] + g);
            }
        }
        normalize({next, static_cast<std::size_t>(ns)});
    }

    std::vector<double> beta(static_cast<std::size_t>(steps + 1) * ns, kNegInf);
    if (terminated_end) {
        beta[static_cast<std::size_t>(steps) * ns] = 0.0;
    } else {
        for (int s = 0; s < ns; ++s) beta[static_cast<std::size_t>(steps) * ns + s] = 0.0;
    }
    for (int t = steps - 1; t >= 0; --t) {
        auto* cur = &beta[static_cast<std::size_t>(t) * ns];
        auto* nxt = &beta[static_cast<std::size_t>(t + 1) * ns];
        for (int s = 0; s < ns; ++s) {
            for (int u = 0; u <= 1; ++u) {
                const double g = gamma[(static_cast<std::size_t>(t) * ns + s) * 2 + u];
                if (g == kNegInf) continue;
                const double tail = nxt[trellis.branch(s, u).next_state];
                if (tail == kNegInf) continue;
                cur[s] = max_star(cur[s], g + tail);
            }
        }
        normalize({cur, static_cast<std::size_t>(ns)});
    }

    std::vector<double> llr(static_cast<std::size_t>(info_steps));
    for (int t = 0; t < info_steps; ++t) {
        double num = kNegInf;  // u = 0
        double den = kNegInf;  // u = 1
        const auto* a = &alpha[static_cast<std::size_t>(t) * ns];
        const auto* b = &beta[static_cast<std::size_t>(t + 1) * ns];
        for (int s = 0; s < ns; ++s) {
            if (a[s] == kNegInf) continue;
            for (int u = 0; u <= 1; ++u) {
                const double g = gamma[(static_cast<std::size_t>(t) * ns + s) * 2 + u];
                if (g == kNegInf) continue;
                const double metric = a[s] + g + b[trellis.branch(s, u).next_state];
                if (u == 0)
                    num = max_star(num, metric);
                else
                    den = max_star(den, metric);
            }
        }
        llr[static_cast<std::size_t>(t)] = num - den;
    }
    return llr;
}

std::vector<double> bcjr_decode(std::span<const double> channel_llrs, const ConvCodeSpec& spec) {
    spec.validate();
    const int m = spec.terminated ? spec.memory : 0;
    if (channel_llrs.size() % 2 != 0 || channel_llrs.size() <= static_cast<std::size_t>(2 * m))
        throw std::invalid_argument("bcjr_decode: channel LLR length mismatch");
    const int k = static_cast<int>(channel_llrs.size() / 2) - m;
    const Trellis trellis = Trellis::feedforward(spec);
    return trellis_bcjr(trellis, channel_llrs, {}, k, m, spec.terminated);
}

std::vector<double> brute_force_posterior(std::span<const double> channel_llrs,
                                          const ConvCodeSpec& spec) {
    spec.validate();
    const int m = spec.terminated ? spec.memory : 0;
    if (channel_llrs.size() % 2 != 0 || channel_llrs.size() <= static_cast<std::size_t>(2 * m))
        throw std::invalid_argument("brute_force_posterior: channel LLR length mismatch");
    const int k = static_cast<int>(channel_llrs.size() / 2) - m;
    if (k > 16) throw std::invalid_argument("brute_force_posterior: k > 16 refused");

    std::vector<double> log_p0(static_cast<std::size_t>(k), kNegInf);
    std::vector<double> log_p1(static_cast<std::size_t>(k), kNegInf);

    BitVec info(static_cast<std::size_t>(k));
    for (std::uint32_t word = 0; word < (1u << k); ++word) {
        for (int j = 0; j < k; ++j) info[static_cast<std::size_t>(j)] = (word >> j) & 1;
        const BitVec code = conv_encode(info, spec);
        double ll = 0.0;
        for (std::size_t i = 0; i < code.size(); ++i) ll += bit_metric(channel_llrs[i], code[i]);
        for (int j = 0; j < k; ++j) {
            auto& acc = info[static_cast<std::size_t>(j)] ? log_p1 : log_p0;
            acc[static_cast<std::size_t>(j)] = max_star(acc[static_cast<std::size_t>(j)], ll);
        }
    }

    std::vector<double> llr(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        llr[static_cast<std::size_t>(j)] =
            log_p0[static_cast<std::size_t>(j)] - log_p1[static_cast<std::size_t>(j)];
    return llr;
}

}  // namespace sid
