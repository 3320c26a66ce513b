#include "cornermap/harmonic_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cornermap {

void validate_coeffs(const SeriesCoefficients& c) {
    if (c.a.size() != c.b.size())
        throw validation_error("coefficient arrays a and b must have equal length");
    if (c.n_terms() < 2)
        throw validation_error("at least two series terms are required");
    for (double x : c.a)
        if (!std::isfinite(x)) throw validation_error("non-finite coefficient a_n");
    for (double x : c.b)
        if (!std::isfinite(x)) throw validation_error("non-finite coefficient b_n");
    if (!(c.b[0] > 0.0)) throw validation_error("b_1 must be positive");
    if (c.a[0] == 0.0) throw validation_error("a_1 must be nonzero");
}

HarmonicCornerMap make_map(const CornerConfig& cfg, const SeriesCoefficients& coeffs) {
    validate_config(cfg);
    validate_coeffs(coeffs);
    return HarmonicCornerMap{cfg, derive_params(cfg), coeffs};
}

double basis_psi(int n, double beta, double r, double phi) {
    if (n < 1) throw validation_error("basis_psi: n must be positive");
    if (!(r >= 0.0)) throw validation_error("basis_psi: r must be non-negative");
    const double hb = 0.5 * M_PI * beta;
    if (std::abs(phi) > hb * (1.0 + 1e-12) + 1e-15)
        throw validation_error("basis_psi: phi outside the closed sector");
    const double t = phi / beta + 0.5 * M_PI;
    return std::pow(r, n / beta) * std::sin(n * t);
}

namespace {

void check_sector_point(const HarmonicCornerMap& m, double r, double phi) {
    const double hb = half_angle(m.config);
    if (!(r >= 0.0) || r > m.config.radius * (1.0 + 1e-12))
        throw validation_error("point outside the closed sector: bad radius");
    if (std::abs(phi) > hb * (1.0 + 1e-12) + 1e-15)
        throw validation_error("point outside the closed sector: bad angle");
}

} // namespace

std::complex<double> evaluate(const HarmonicCornerMap& m, double r, double phi) {
    check_sector_point(m, r, phi);
    const double beta = m.config.beta;
    const double t = phi / beta + 0.5 * M_PI;
    double u = -m.derived.mu * r * std::sin(phi - m.derived.phi_star);
    double v = 0.0;
    for (int k = 0; k < m.coeffs.n_terms(); ++k) {
        const int n = k + 1;
        const double psi = std::pow(r, n / beta) * std::sin(n * t);
        u += m.coeffs.a[k] * psi;
        v += m.coeffs.b[k] * psi;
    }
    return {u, v};
}

std::complex<double> evaluate(const HarmonicCornerMap& m, std::complex<double> z) {
    return evaluate(m, std::abs(z), std::atan2(z.imag(), z.real()));
}

Jacobian jacobian(const HarmonicCornerMap& m, double r, double phi) {
    check_sector_point(m, r, phi);
    const double beta = m.config.beta;
    Jacobian J;
    // Gradient of Q = mu sin(phi_star) x - mu cos(phi_star) y.
    J.du_dx = m.derived.mu * std::sin(m.derived.phi_star);
    J.du_dy = -m.derived.mu * std::cos(m.derived.phi_star);

    if (r == 0.0) {
        // r^{n/beta - 1} -> 0 for every n when beta < 1; for beta > 1 the
        // n = 1 term blows up and only the linear part is meaningful.
        J.singular_at_vertex = beta > 1.0;
        return J;
    }

    const double t = phi / beta + 0.5 * M_PI;
    const double c = std::cos(phi), s = std::sin(phi);
    for (int k = 0; k < m.coeffs.n_terms(); ++k) {
        const int n = k + 1;
        const double q = (n / beta) * std::pow(r, n / beta - 1.0);
        const double sn = std::sin(n * t), cn = std::cos(n * t);
        const double dpsi_dx = q * (sn * c - cn * s);
        const double dpsi_dy = q * (sn * s + cn * c);
        J.du_dx += m.coeffs.a[k] * dpsi_dx;
        J.du_dy += m.coeffs.a[k] * dpsi_dy;
        J.dv_dx += m.coeffs.b[k] * dpsi_dx;
        J.dv_dy += m.coeffs.b[k] * dpsi_dy;
    }
    return J;
}

SeriesCoefficients fit_from_arc(const CornerConfig& cfg, const DerivedParams& d,
                                std::vector<ArcSample> samples, int n_terms,
                                const FitOptions& opt) {
    validate_config(cfg);
    if (n_terms < 2) throw validation_error("fit_from_arc: n_terms must be >= 2");
    if (static_cast<int>(samples.size()) < 8 * n_terms)
        throw validation_error("fit_from_arc: need at least 8*n_terms samples");
    if (opt.simpson_panels < 2) throw validation_error("fit_from_arc: bad panel count");

    const double hb = half_angle(cfg);
    const double R = cfg.radius;
    std::sort(samples.begin(), samples.end(),
              [](const ArcSample& p, const ArcSample& q) { return p.phi < q.phi; });
    for (const ArcSample& s : samples) {
        if (std::abs(s.phi) > hb * (1.0 + 1e-12) + 1e-15)
            throw validation_error("fit_from_arc: sample angle outside the arc");
        if (!std::isfinite(s.value.real()) || !std::isfinite(s.value.imag()))
            throw validation_error("fit_from_arc: non-finite sample value");
    }
    if (samples.front().phi > -0.98 * hb || samples.back().phi < 0.98 * hb)
        throw validation_error("fit_from_arc: samples must span the arc");

    double mag = 0.0;
    for (const ArcSample& s : samples) mag = std::max(mag, std::abs(s.value));
    const double scale = std::max(1.0, mag);

    // Exact side values at the arc ends, used both as consistency checks and
    // to pin the interpolant there.  The sample nearest each end must agree
    // with the side value up to the locally observed variation of the data
    // over its distance to the end (so dense interior samplings pass while a
    // genuine mismatch of the boundary correspondence throws).
    const std::complex<double> end_lo(cfg.sigma_plus * R, 0.0);   // phi = -hb
    const std::complex<double> end_hi(-cfg.sigma_minus * R, 0.0); // phi = +hb
    const auto end_check = [&](const ArcSample& s0, const ArcSample& s1,
                               std::complex<double> end, double dist, const char* where) {
        const double gap = std::abs(s1.phi - s0.phi);
        const double slope = gap > 0.0 ? std::abs(s1.value - s0.value) / gap : 0.0;
        if (std::abs(s0.value - end) > opt.endpoint_tol * scale + 2.0 * slope * dist)
            throw validation_error(std::string("fit_from_arc: arc data inconsistent with side data at phi = ") + where);
    };
    end_check(samples.front(), samples[1], end_lo, samples.front().phi + hb, "-pi*beta/2");
    end_check(samples.back(), samples[samples.size() - 2], end_hi, hb - samples.back().phi, "+pi*beta/2");
    if (samples.front().phi > -hb) samples.insert(samples.begin(), {-hb, end_lo});
    if (samples.back().phi < hb) samples.push_back({hb, end_hi});

    // Mismatch g = F_arc - Q on the substituted angle t = phi/beta + pi/2.
    const int S = static_cast<int>(samples.size());
    std::vector<double> ts(S);
    std::vector<std::complex<double>> gs(S);
    for (int i = 0; i < S; ++i) {
        const double phi = std::clamp(samples[i].phi, -hb, hb);
        ts[i] = std::clamp(phi / cfg.beta + 0.5 * M_PI, 0.0, M_PI);
        gs[i] = samples[i].value - std::complex<double>(linear_part_q(cfg, d, R, phi), 0.0);
    }

    const int M = opt.simpson_panels + (opt.simpson_panels % 2); // even
    const double ht = M_PI / M;
    std::vector<std::complex<double>> gq(M + 1);
    int seg = 0;
    for (int k = 0; k <= M; ++k) {
        const double t = k * ht;
        while (seg + 2 < S && ts[seg + 1] <= t) ++seg;
        const double t0 = ts[seg], t1 = ts[seg + 1];
        const double w = t1 > t0 ? std::clamp((t - t0) / (t1 - t0), 0.0, 1.0) : 0.0;
        gq[k] = gs[seg] + w * (gs[seg + 1] - gs[seg]);
    }

    SeriesCoefficients out;
    out.a.resize(n_terms);
    out.b.resize(n_terms);
    for (int n = 1; n <= n_terms; ++n) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k <= M; ++k) {
            const double w = (k == 0 || k == M) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            acc += w * gq[k] * std::sin(n * k * ht);
        }
        acc *= (ht / 3.0) * (2.0 / M_PI) * std::pow(R, -n / cfg.beta);
        out.a[n - 1] = acc.real();
        out.b[n - 1] = acc.imag();
    }

    double gmag = 0.0;
    for (const auto& g : gs) gmag = std::max(gmag, std::abs(g));
    const double floor = opt.degenerate_tol * std::max(1.0, gmag);
    if (!(out.b[0] >= floor))
        throw validation_error("fit_from_arc: degenerate fit, b_1 is not positive");
    if (!(std::abs(out.a[0]) >= floor))
        throw validation_error("fit_from_arc: degenerate fit, a_1 vanishes");
    return out;
}

double harmonicity_residual(const HarmonicCornerMap& m, double h) {
    if (!(h > 0.0)) throw validation_error("harmonicity_residual: h must be positive");
    const double hb = half_angle(m.config);
    const double R = m.config.radius;

    const auto eval_xy = [&](double x, double y) {
        const double r = std::hypot(x, y);
        const double phi = std::atan2(y, x);
        return evaluate(m, r, phi);
    };

    double worst = 0.0;
    for (int ir = 0; ir < 8; ++ir) {
        const double r = (0.15 + 0.1 * ir) * R;
        for (int ip = 0; ip < 10; ++ip) {
            const double phi = (-0.9 + 0.2 * ip) * hb;
            const double x = r * std::cos(phi), y = r * std::sin(phi);
            bool inside = true;
            const double dx[4] = {h, -h, 0.0, 0.0};
            const double dy[4] = {0.0, 0.0, h, -h};
            for (int k = 0; k < 4; ++k) {
                const double rr = std::hypot(x + dx[k], y + dy[k]);
                const double pp = std::atan2(y + dy[k], x + dx[k]);
                if (rr > R || std::abs(pp) > hb) { inside = false; break; }
            }
            if (!inside) continue;
            const std::complex<double> c0 = eval_xy(x, y);
            std::complex<double> lap = -4.0 * c0;
            for (int k = 0; k < 4; ++k) lap += eval_xy(x + dx[k], y + dy[k]);
            lap /= h * h;
            worst = std::max({worst, std::abs(lap.real()), std::abs(lap.imag())});
        }
    }
    return worst;
}

} // namespace cornermap
