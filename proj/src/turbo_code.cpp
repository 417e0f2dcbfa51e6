#include "sid/turbo_code.hpp"

#include <stdexcept>

namespace sid {

namespace {

std::uint8_t parity_of(unsigned v) {
    std::uint8_t p = 0;
    for (; v; v >>= 1) p ^= static_cast<std::uint8_t>(v & 1);
    return p;
}

struct RscOutput {
    BitVec parity;     // k bits, plus m tail parities when terminated
    BitVec tail_info;  // the m termination inputs (empty when not terminated)
};

RscOutput rsc_encode(std::span<const std::uint8_t> info, const ConvCodeSpec& spec,
                     bool terminated) {
    const int m = spec.memory;
    unsigned state = 0;
    RscOutput out;
    out.parity.reserve(info.size() + static_cast<std::size_t>(terminated ? m : 0));

    auto step = [&](std::uint8_t u) {
        const std::uint8_t d =
            static_cast<std::uint8_t>(u ^ parity_of(state & spec.generators[0]));
        const unsigned window = (static_cast<unsigned>(d) << m) | state;
        out.parity.push_back(parity_of(window & spec.generators[1]));
        state = (static_cast<unsigned>(d) << (m - 1)) | (state >> 1);
    };

    for (std::uint8_t u : info) step(u & 1);
    if (terminated) {
        for (int i = 0; i < m; ++i) {
            const std::uint8_t u = parity_of(state & spec.generators[0]);
            out.tail_info.push_back(u);
            step(u);  // register input becomes zero
        }
    }
    return out;
}

struct DemuxedLlrs {
    std::vector<double> sys1, par1;  // k+m steps each (constituent 1, with tail)
    std::vector<double> sys2, par2;  // k steps each (constituent 2)
    int k = 0;
};

DemuxedLlrs demux(std::span<const double> llrs, const TurboSpec& spec) {
    const int m = spec.constituent.memory;
    if (llrs.size() < static_cast<std::size_t>(3 + 2 * m) ||
        (llrs.size() - static_cast<std::size_t>(2 * m)) % 3 != 0)
        throw std::invalid_argument("turbo_decode: channel LLR length mismatch");
    const int k = static_cast<int>((llrs.size() - static_cast<std::size_t>(2 * m)) / 3);

    DemuxedLlrs d;
    d.k = k;
    d.sys1.reserve(static_cast<std::size_t>(k + m));
    d.par1.reserve(static_cast<std::size_t>(k + m));
    for (int i = 0; i < k; ++i) {
        d.sys1.push_back(llrs[static_cast<std::size_t>(3 * i)]);
        d.par1.push_back(llrs[static_cast<std::size_t>(3 * i + 1)]);
        d.par2.push_back(llrs[static_cast<std::size_t>(3 * i + 2)]);
    }
    for (int t = 0; t < m; ++t) {
        d.sys1.push_back(llrs[static_cast<std::size_t>(3 * k + 2 * t)]);
        d.par1.push_back(llrs[static_cast<std::size_t>(3 * k + 2 * t + 1)]);
    }
    d.sys2 = interleave<double>({d.sys1.data(), static_cast<std::size_t>(k)},
                                spec.interleaver_depth);
    return d;
}

// One constituent BCJR pass. coded LLRs are (systematic, parity) per step.
std::vector<double> constituent_app(const Trellis& trellis, std::span<const double> sys,
                                    std::span<const double> par, std::span<const double> apriori,
                                    int k, int tail_steps, bool terminated_end) {
    std::vector<double> coded(2 * sys.size());
    for (std::size_t t = 0; t < sys.size(); ++t) {
        coded[2 * t] = sys[t];
        coded[2 * t + 1] = par[t];
    }
    return trellis_bcjr(trellis, coded, apriori, k, tail_steps, terminated_end);
}

}  // namespace

void TurboSpec::validate() const {
    constituent.validate();
    if (interleaver_depth < 1) throw std::invalid_argument("TurboSpec: depth must be >= 1");
    if (iterations < 1) throw std::invalid_argument("TurboSpec: iterations must be >= 1");
}

std::vector<std::size_t> interleave_permutation(std::size_t length, int depth) {
    if (depth < 1) throw std::invalid_argument("interleave: depth must be >= 1");
    std::vector<std::size_t> perm;
    perm.reserve(length);
    for (std::size_t col = 0; col < static_cast<std::size_t>(depth); ++col)
        for (std::size_t idx = col; idx < length; idx += static_cast<std::size_t>(depth))
            perm.push_back(idx);
    return perm;
}

BitVec turbo_encode(std::span<const std::uint8_t> info_bits, const TurboSpec& spec) {
    spec.validate();
    if (info_bits.empty()) throw std::invalid_argument("turbo_encode: empty input");

    const int m = spec.constituent.memory;
    const BitVec interleaved = interleave<std::uint8_t>(info_bits, spec.interleaver_depth);
    const RscOutput enc1 = rsc_encode(info_bits, spec.constituent, true);
    const RscOutput enc2 = rsc_encode(interleaved, spec.constituent, false);

    BitVec out;
    out.reserve(3 * info_bits.size() + static_cast<std::size_t>(2 * m));
    for (std::size_t i = 0; i < info_bits.size(); ++i) {
        out.push_back(info_bits[i] & 1);
        out.push_back(enc1.parity[i]);
        out.push_back(enc2.parity[i]);
    }
    for (int t = 0; t < m; ++t) {
        out.push_back(enc1.tail_info[static_cast<std::size_t>(t)]);
        out.push_back(enc1.parity[info_bits.size() + static_cast<std::size_t>(t)]);
    }
    return out;
}

std::vector<double> turbo_decode(std::span<const double> channel_llrs, const TurboSpec& spec) {
    spec.validate();
    const DemuxedLlrs d = demux(channel_llrs, spec);
    const int k = d.k;
    const int m = spec.constituent.memory;
    const int depth = spec.interleaver_depth;
    const Trellis trellis = Trellis::recursive_systematic(spec.constituent);

    std::vector<double> apriori1(static_cast<std::size_t>(k), 0.0);
    std::vector<double> app2;
    for (int it = 0; it < spec.iterations; ++it) {
        const auto app1 = constituent_app(trellis, d.sys1, d.par1, apriori1, k, m, true);
        std::vector<double> ext1(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            ext1[static_cast<std::size_t>(i)] = app1[static_cast<std::size_t>(i)] -
                                                apriori1[static_cast<std::size_t>(i)] -
                                                d.sys1[static_cast<std::size_t>(i)];

        const auto apriori2 = interleave<double>(ext1, depth);
        app2 = constituent_app(trellis, d.sys2, d.par2, apriori2, k, 0, false);
        if (it + 1 == spec.iterations) break;

        std::vector<double> ext2(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            ext2[static_cast<std::size_t>(i)] = app2[static_cast<std::size_t>(i)] -
                                                apriori2[static_cast<std::size_t>(i)] -
                                                d.sys2[static_cast<std::size_t>(i)];
        apriori1 = deinterleave<double>(ext2, depth);
    }
    return deinterleave<double>(app2, depth);
}

std::vector<double> turbo_first_constituent_app(std::span<const double> channel_llrs,
                                                const TurboSpec& spec) {
    spec.validate();
    const DemuxedLlrs d = demux(channel_llrs, spec);
    const Trellis trellis = Trellis::recursive_systematic(spec.constituent);
    return constituent_app(trellis, d.sys1, d.par1, {}, d.k, spec.constituent.memory, true);
}

}  // namespace sid
