#include "cornermap/validation.hpp"

#include "cornermap/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace cornermap {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRTop = 1e-2;       // top of the tracing window (R = 1 fixtures)
constexpr double kSideTarget = 0.06; // desired leading-correction size at kRTop

HarmonicCornerMap scaled_map(double beta, double sp, double sm, SeriesCoefficients c, double s) {
    for (auto& x : c.a) x *= s;
    for (auto& x : c.b) x *= s;
    return make_map(CornerConfig{beta, sp, sm, 1.0}, c);
}

} // namespace

SeriesCoefficients draw_generic_coeffs(Rng& rng, int n_terms, double decay) {
    if (n_terms < 2)
        throw validation_error("draw_generic_coeffs: need at least 2 terms");
    SeriesCoefficients c;
    c.a.resize(static_cast<std::size_t>(n_terms));
    c.b.resize(static_cast<std::size_t>(n_terms));
    for (int k = 0; k < n_terms; ++k)
        c.a[static_cast<std::size_t>(k)] = rng.uniform(0.5, 1.5) * rng.pick_sign() * std::pow(decay, k);
    for (int k = 0; k < n_terms; ++k)
        c.b[static_cast<std::size_t>(k)] = rng.uniform(0.5, 1.5) * std::pow(decay, k);
    return c;
}

HarmonicCornerMap draw_side_fixture(Rng& rng, double beta, double sigma_plus, double sigma_minus,
                                    const std::vector<double>& thetas_in) {
    for (int attempt = 0; attempt < 500; ++attempt) {
        const SeriesCoefficients c = draw_generic_coeffs(rng);
        const HarmonicCornerMap m = make_map(CornerConfig{beta, sigma_plus, sigma_minus, 1.0}, c);
        const AsymptoticKit kit = make_kit(m);

        std::vector<double> thetas = thetas_in;
        if (thetas.empty())
            thetas = {0.5 * kit.theta_star, kit.theta_star + 0.5 * (kPi - kit.theta_star)};
        if (beta < 1.0) {
            bool near_star = false;
            for (double t : thetas) near_star = near_star || std::abs(t - kit.theta_star) < 0.2;
            if (near_star) continue;
        }

        double sig = 0.0;
        double s;
        if (beta < 1.0) {
            for (double t : thetas) sig = std::max(sig, std::abs(e1_of_theta(kit, t)));
            sig *= std::pow(kRTop, 1.0 / beta - 1.0);
            s = std::min(1.0, kSideTarget / sig);
        } else {
            for (double t : thetas) sig = std::max(sig, std::abs(beta * f1_of_theta(kit, t)));
            sig *= std::pow(kRTop, 1.0 - 1.0 / beta);
            s = std::max(1.0, sig / kSideTarget);
        }
        return scaled_map(beta, sigma_plus, sigma_minus, c, s);
    }
    throw solver_error("draw_side_fixture: exhausted sampling attempts");
}

HarmonicCornerMap draw_star_fixture(Rng& rng, double beta, double sigma_plus, double sigma_minus) {
    for (int attempt = 0; attempt < 2000; ++attempt) {
        const SeriesCoefficients c = draw_generic_coeffs(rng);
        const HarmonicCornerMap m = make_map(CornerConfig{beta, sigma_plus, sigma_minus, 1.0}, c);
        const AsymptoticKit kit = make_kit(m);

        const double tstar = m.derived.phi_star / beta + kPi / 2.0;
        const double s2 = std::abs(std::sin(2.0 * tstar));
        if (s2 < 0.15) continue;
        const double e1s_sig = std::abs(e1_star(kit)) * std::pow(kRTop, 2.0 / beta - 1.0);
        if (e1s_sig < 1e-8) continue;
        const double d_cap =
            std::min(0.05, 0.04 * beta * s2 / std::max(1e-9, 2.0 * std::abs(std::cos(2.0 * tstar))));
        if (d_cap < 0.005) continue;

        HarmonicCornerMap m2 = scaled_map(beta, sigma_plus, sigma_minus, c, d_cap / e1s_sig);
        const double cot = 1.0 / std::tan(theta_star_angle(m2.coeffs.a1(), m2.coeffs.b1()));
        const double c2 = std::abs(m2.coeffs.a[1] - m2.coeffs.b[1] * cot) * s2;
        const double c3 =
            std::abs(m2.coeffs.a[2] - m2.coeffs.b[2] * cot) * std::abs(std::sin(3.0 * tstar));
        if (c2 < 1e-9 || c3 / c2 * std::pow(kRTop, 1.0 / beta) > 0.04) continue;
        return m2;
    }
    throw solver_error("draw_star_fixture: exhausted sampling attempts");
}

ValidationReport run_validation_suite(std::uint64_t seed, int sets_per_beta) {
    if (sets_per_beta < 1)
        throw validation_error("run_validation_suite: sets_per_beta must be >= 1");

    ValidationReport rep;
    rep.seed = seed;
    rep.all_pass = true;
    Rng rng(seed);

    const double betas[6] = {0.4, 0.5, 0.75, 1.25, 1.5, 1.75};
    const auto rs_inverse = log_spaced_radii(1e-5, 1e-2);
    const auto rs_fwd_lo = log_spaced_radii(1e-6, 1e-3); // beta < 1 forward rays
    // beta > 1 forward rays: rho ~ |c1| r^{1/beta}, and the fitted slope carries
    // a relative rho^{2-beta} correction from the theta* branch, which for beta
    // near 2 decays slowly.  Keep rho <~ 1e-4 so the slope sits within 0.05 of
    // beta - 1 for all admissible fixtures; the trace is a direct evaluation,
    // so tiny radii cost nothing in accuracy.
    const auto rs_fwd_hi = log_spaced_radii(1e-13, 1e-8);

    auto add_row = [&rep](ValidationRow row) {
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(std::move(row));
    };

    auto run_curve = [&](const HarmonicCornerMap& m, const AsymptoticKit& kit, int set,
                         bool inverse, double angle, const std::vector<double>& radii,
                         double want_limit, double want_order, double order_tol,
                         const char* tag) {
        ValidationRow row;
        row.beta = m.config.beta;
        row.set_index = set;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s %s=%.6f", tag, inverse ? "theta" : "phi", angle);
        row.curve = buf;
        row.expected_limit = want_limit;
        row.expected_order = want_order;
        row.limit_tol = 1e-2;
        row.order_tol = order_tol;
        row.measured_limit = kNaN;
        row.measured_order = kNaN;
        row.fit_residual = kNaN;
        row.remainder_expected = kNaN;
        row.remainder_measured = kNaN;
        try {
            const TracedCurve tc = inverse ? trace_inverse_ray(m, angle, radii)
                                           : trace_forward_ray(m, angle, radii);
            const ExitAngleEstimate est = estimate_exit_angle(tc, kit);
            row.measured_limit = est.limit_angle;
            row.measured_order = est.order_estimate.value_or(kNaN);
            row.fit_residual = est.fit_residual;
            const DiscrepancyReport d = compare_with_asymptotics(tc, kit);
            row.remainder_expected = d.expected_remainder_exponent;
            row.remainder_measured = d.remainder_exponent;
            row.pass = std::abs(est.limit_angle - want_limit) <= row.limit_tol &&
                       est.order_estimate.has_value() &&
                       std::abs(*est.order_estimate - want_order) <= order_tol;
        } catch (const std::exception& e) {
            row.curve += std::string(" [error: ") + e.what() + "]";
            row.pass = false;
        }
        add_row(std::move(row));
    };

    for (double beta : betas) {
        const double hb = kPi * beta / 2.0;
        for (int set = 0; set < sets_per_beta; ++set) {
            const double sp = rng.uniform(1.2, 1.9);
            const double sm = rng.uniform(0.55, 0.9);
            if (beta < 1.0) {
                const std::vector<double> thetas = {kPi / 2.0, 0.35 * kPi, 0.7 * kPi};
                const HarmonicCornerMap m = draw_side_fixture(rng, beta, sp, sm, thetas);
                const AsymptoticKit kit = make_kit(m);
                for (double t : thetas)
                    run_curve(m, kit, set, true, t, rs_inverse, m.derived.phi_star,
                              1.0 / beta - 1.0, 0.05, "inverse");
                const double phi_t = m.derived.phi_star + 0.5 * (hb - m.derived.phi_star);
                run_curve(m, kit, set, false, phi_t, rs_fwd_lo, kPi, 1.0 / beta - 1.0, 0.05,
                          "forward");
            } else {
                const HarmonicCornerMap ms = draw_side_fixture(rng, beta, sp, sm);
                const AsymptoticKit kits = make_kit(ms);
                const double ts = kits.theta_star;
                run_curve(ms, kits, set, true, 0.5 * ts, rs_inverse, -hb, 1.0 - 1.0 / beta, 0.05,
                          "inverse");
                run_curve(ms, kits, set, true, ts + 0.5 * (kPi - ts), rs_inverse, hb,
                          1.0 - 1.0 / beta, 0.05, "inverse");
                const double phi_t = ms.derived.phi_star + 0.5 * (hb - ms.derived.phi_star);
                run_curve(ms, kits, set, false, phi_t, rs_fwd_hi, ts, beta - 1.0, 0.05, "forward");

                const double sp2 = rng.uniform(1.5, 2.0);
                const double sm2 = rng.uniform(0.4, 0.6);
                const HarmonicCornerMap mt = draw_star_fixture(rng, beta, sp2, sm2);
                const AsymptoticKit kitt = make_kit(mt);
                run_curve(mt, kitt, set, true, kitt.theta_star, rs_inverse, mt.derived.phi_star,
                          2.0 / beta - 1.0, 0.1, "inverse-star");
            }
        }
    }
    return rep;
}

} // namespace cornermap
