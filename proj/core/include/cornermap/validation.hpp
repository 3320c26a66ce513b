#pragma once

#include "cornermap/curve_tracer.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cornermap {

// Deterministic uniform sampler with a fixed 53-bit mantissa path so that a
// given seed reproduces the same fixtures on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    double pick_sign() { return uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0; }

private:
    std::mt19937_64 eng_;
};

// Random coefficient set with geometric decay; satisfies b1 > 0, a1 != 0.
SeriesCoefficients draw_generic_coeffs(Rng& rng, int n_terms = 8, double decay = 0.3);

// Random map conditioned so the side-hugging correction terms are measurable
// but still asymptotic on the tracing window r in [1e-5, 1e-2] (R = 1).  An
// empty theta list draws the beta > 1 defaults {theta*/2, midpoint to pi}.
HarmonicCornerMap draw_side_fixture(Rng& rng, double beta, double sigma_plus, double sigma_minus,
                                    const std::vector<double>& thetas = {});

// Random map conditioned so the theta* branch dominates on the window: the
// second-harmonic term is significant and the third-harmonic contamination
// is bounded.
HarmonicCornerMap draw_star_fixture(Rng& rng, double beta, double sigma_plus, double sigma_minus);

struct ValidationRow {
    double beta = 0.0;
    int set_index = 0;
    std::string curve; // e.g. "inverse theta=1.570796"
    double expected_limit = 0.0;
    double measured_limit = 0.0;
    double limit_tol = 0.0;
    double expected_order = 0.0;
    double measured_order = 0.0;
    double order_tol = 0.0;
    double fit_residual = 0.0;
    double remainder_expected = 0.0; // NaN when only o(.) is known
    double remainder_measured = 0.0; // NaN when deviation is at noise level
    bool pass = false;
};

struct ValidationReport {
    std::uint64_t seed = 0;
    std::vector<ValidationRow> rows;
    bool all_pass = false;
};

inline constexpr std::uint64_t kDefaultValidationSeed = 20240817;

// Oracle-vs-asymptote sweep: for each beta in {0.4, 0.5, 0.75, 1.25, 1.5,
// 1.75} and `sets_per_beta` random fixtures, traces inverse curves at side and
// theta* rays plus one forward ray, estimates exit angles/orders, and checks
// them against the closed-form laws (limits within 1e-2, orders within 0.05,
// theta*-branch order within 0.1).
ValidationReport run_validation_suite(std::uint64_t seed = kDefaultValidationSeed,
                                      int sets_per_beta = 5);

} // namespace cornermap
