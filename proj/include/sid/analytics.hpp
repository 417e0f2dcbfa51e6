#pragma once

#include <iosfwd>
#include <vector>

namespace sid::analytics {

// P(exactly i of w bits wrong) for per-bit error rate p; log-gamma domain so
// block lengths in the thousands stay finite.
double p_block_errors(int w, int i, double p);

// P(more than n_max errors), i.e. the fraction of blocks a flip budget of
// n_max positions can never repair.
double residual_error_prob(int w, int n_max, double p);

// Smallest N whose cumulative binomial mass reaches `target`.
int min_nmax(int w, double p, double target);

// Normalization of the correction distribution y = k e^{-ax} over x = 1..w.
double k_from_a(double a, int w);
// The small-a shortcut k ~ a / (1 - e^{-aw}).
double k_approx_from_a(double a, int w);

// Eb/N0 -> S/N for the rate-1/2 system. Rounded mode uses the flat 3 dB the
// coefficient tables were derived with; exact mode uses 10*log10(1/rate).
double snr_from_ebn0(double ebn0_db, double code_rate = 0.5, bool rounded = true);

inline constexpr double kRateHalfSnrOffsetDbRounded = 3.0;

// Linear dependence of the polynomial coefficients on block length.
struct LinearCoeffs {
    double KA = -0.00002;
    double NA = 0.043;
    double KB = -0.00015;
    double NB = 0.225;
    double KC = -0.00025;
    double NC = 0.32;
};

// Parses a JSON object {"KA": ..., "NA": ..., ...}; missing keys keep their
// defaults. Used to swap in re-fitted coefficients.
LinearCoeffs load_linear_coeffs(std::istream& in);

struct AbcCoeffs {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

AbcCoeffs coeff_abc(int w, const LinearCoeffs& lin = {});

// a(S/N, w) = A(w) (S/N)^2 + B(w) (S/N) + C(w), S/N in dB.
double exponent_a(int w, double snr_db, const LinearCoeffs& lin = {});

// Range the coefficients were fitted over; outside it predictions are
// extrapolations and get flagged.
bool exponent_domain_contains(int w, double snr_db);

struct PredictX0 {
    double a = 0.0;
    double x0 = 0.0;
    int x0_ceil = 0;
    bool extrapolated = false;
    bool valid = true;  // false when the reconstructed exponent is <= 0
};

// Number of least-reliable positions whose cumulative correction share
// reaches `target`, from the fitted exponential model alone.
PredictX0 predict_x0(int w, double ebn0_db, double target, const LinearCoeffs& lin = {});

// Share of flip-corrected blocks whose deciding position had the x-th lowest
// reliability, x = 1..w. `blocks` is the denominator behind the fractions.
struct CorrectionHistogram {
    int w = 0;
    double ebn0_db = 0.0;
    long blocks = 0;
    std::vector<double> fraction;  // fraction[x-1] for x = 1..w
};

struct ExponentialFit {
    double k = 0.0;
    double a = 0.0;
    int points_used = 0;
};

// Least squares of ln(fraction) on x over the usable points; needs >= 3.
ExponentialFit fit_exponential(const CorrectionHistogram& hist);

// Measured per-length fit values the linear coefficients were reduced from,
// exposed for cross-checks next to the reconstructed polynomial values.
struct MeasuredFit {
    int w;
    double ebn0_db;
    double k;
    double a;
};
const std::vector<MeasuredFit>& measured_fits();

struct MeasuredAbc {
    int w;
    double A;
    double B;
    double C;
};
const std::vector<MeasuredAbc>& measured_abc();

}  // namespace sid::analytics
