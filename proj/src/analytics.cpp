#include "sid/analytics.hpp"

#include <cmath>
#include <istream>
#include <stdexcept>

#include "json.hpp"

namespace sid::analytics {

double p_block_errors(int w, int i, double p) {
    if (w < 0 || i < 0 || i > w) throw std::invalid_argument("p_block_errors: need 0 <= i <= w");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p_block_errors: need 0 <= p <= 1");
    if (p == 0.0) return i == 0 ? 1.0 : 0.0;
    if (p == 1.0) return i == w ? 1.0 : 0.0;
    const double log_choose =
        std::lgamma(w + 1.0) - std::lgamma(i + 1.0) - std::lgamma(w - i + 1.0);
    return std::exp(log_choose + i * std::log(p) + (w - i) * std::log1p(-p));
}

double residual_error_prob(int w, int n_max, double p) {
    if (n_max < 0 || n_max > w)
        throw std::invalid_argument("residual_error_prob: need 0 <= n_max <= w");
    double sum = 0.0;
    for (int i = w; i > n_max; --i) sum += p_block_errors(w, i, p);
    return sum;
}

int min_nmax(int w, double p, double target) {
    if (!(target > 0.0) || !(target < 1.0))
        throw std::invalid_argument("min_nmax: target must be in (0, 1)");
    if (p == 1.0) return w;
    double cumulative = 0.0;
    for (int n = 0; n <= w; ++n) {
        cumulative += p_block_errors(w, n, p);
        if (cumulative >= target) return n;
    }
    return w;
}

double k_from_a(double a, int w) {
    if (w < 1) throw std::invalid_argument("k_from_a: w must be >= 1");
    if (a == 0.0) return 1.0 / w;
    return std::expm1(a) / -std::expm1(-a * w);
}

double k_approx_from_a(double a, int w) {
    if (w < 1) throw std::invalid_argument("k_approx_from_a: w must be >= 1");
    return a / -std::expm1(-a * w);
}

double snr_from_ebn0(double ebn0_db, double code_rate, bool rounded) {
    if (rounded) {
        if (code_rate != 0.5)
            throw std::invalid_argument("snr_from_ebn0: rounded offset is defined for rate 1/2");
        return ebn0_db - kRateHalfSnrOffsetDbRounded;
    }
    return ebn0_db + 10.0 * std::log10(code_rate);
}

LinearCoeffs load_linear_coeffs(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    LinearCoeffs lin;
    lin.KA = doc.value("KA", lin.KA);
    lin.NA = doc.value("NA", lin.NA);
    lin.KB = doc.value("KB", lin.KB);
    lin.NB = doc.value("NB", lin.NB);
    lin.KC = doc.value("KC", lin.KC);
    lin.NC = doc.value("NC", lin.NC);
    return lin;
}

AbcCoeffs coeff_abc(int w, const LinearCoeffs& lin) {
    if (w < 1) throw std::invalid_argument("coeff_abc: w must be >= 1");
    return {lin.KA * w + lin.NA, lin.KB * w + lin.NB, lin.KC * w + lin.NC};
}

double exponent_a(int w, double snr_db, const LinearCoeffs& lin) {
    const AbcCoeffs abc = coeff_abc(w, lin);
    return abc.A * snr_db * snr_db + abc.B * snr_db + abc.C;
}

bool exponent_domain_contains(int w, double snr_db) {
    return w >= 128 && w <= 1024 && snr_db >= -2.0 && snr_db <= 2.0;
}

PredictX0 predict_x0(int w, double ebn0_db, double target, const LinearCoeffs& lin) {
    if (!(target >= 0.0) || !(target < 1.0))
        throw std::invalid_argument("predict_x0: target must be in [0, 1)");
    const double snr_db = snr_from_ebn0(ebn0_db);
    PredictX0 result;
    result.a = exponent_a(w, snr_db, lin);
    result.extrapolated = !exponent_domain_contains(w, snr_db);
    if (result.a <= 0.0) {
        result.valid = false;
        return result;
    }
    result.x0 = std::log(1.0 / (1.0 - target * -std::expm1(-result.a * w))) / result.a;
    result.x0_ceil = static_cast<int>(std::ceil(result.x0));
    return result;
}

ExponentialFit fit_exponential(const CorrectionHistogram& hist) {
    const double threshold = hist.blocks > 0 ? 1.0 / static_cast<double>(hist.blocks) : 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t idx = 0; idx < hist.fraction.size(); ++idx) {
        const double f = hist.fraction[idx];
        if (f <= 0.0 || f < threshold) continue;
        const double x = static_cast<double>(idx + 1);
        const double y = std::log(f);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw std::invalid_argument("fit_exponential: fewer than 3 usable points");
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return {std::exp(intercept), -slope, n};
}

const std::vector<MeasuredFit>& measured_fits() {
    static const std::vector<MeasuredFit> table = {
        {128, 1.0, 0.083, 0.08},  {128, 1.5, 0.127, 0.12},  {128, 2.0, 0.271, 0.24},
        {128, 2.5, 0.323, 0.28},  {128, 3.0, 0.418, 0.35},  {128, 3.5, 0.461, 0.38},
        {128, 4.0, 0.646, 0.5},   {128, 4.5, 0.733, 0.55},  {128, 5.0, 0.821, 0.6},
        {160, 1.0, 0.030, 0.038}, {160, 1.5, 0.078, 0.075}, {160, 2.0, 0.127, 0.12},
        {160, 2.5, 0.221, 0.2},   {160, 3.0, 0.284, 0.25},  {160, 3.5, 0.47, 0.38},
        {160, 4.0, 0.582, 0.46},  {160, 4.5, 0.792, 0.6},   {160, 5.0, 1.059, 0.7},
        {320, 1.0, 0.02, 0.02},   {320, 1.5, 0.025, 0.025}, {320, 2.0, 0.062, 0.06},
        {320, 2.5, 0.221, 0.2},   {320, 3.0, 0.258, 0.23},  {320, 3.5, 0.419, 0.35},
        {320, 4.0, 0.733, 0.5},   {320, 4.5, 1.222, 0.8},   {320, 5.0, 1.454, 0.9},
    };
    return table;
}

const std::vector<MeasuredAbc>& measured_abc() {
    static const std::vector<MeasuredAbc> table = {
        {128, 0.04, 0.206, 0.288},
        {160, 0.04, 0.201, 0.28},
        {320, 0.037, 0.177, 0.24},
    };
    return table;
}

}  // namespace sid::analytics
