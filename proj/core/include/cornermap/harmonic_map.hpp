#pragma once

#include "cornermap/corner_model.hpp"

#include <complex>
#include <vector>

namespace cornermap {

// Truncated series coefficients of the harmonic corner map
//   F(r e^{i phi}) = Q(r, phi) + sum_{n=1..N} (a_n + i b_n) psi_n(r, phi),
// stored zero-based: a[k] holds a_{k+1}.  Admissibility requires N >= 2,
// b_1 > 0 and a_1 != 0 (these make the exit-angle laws well defined).
struct SeriesCoefficients {
    std::vector<double> a;
    std::vector<double> b;

    int n_terms() const { return static_cast<int>(a.size()); }
    double a1() const { return a[0]; }
    double b1() const { return b[0]; }
};

// Throws validation_error unless n_terms >= 2, sizes match, all entries are
// finite, b_1 > 0 and a_1 != 0.
void validate_coeffs(const SeriesCoefficients& c);

struct HarmonicCornerMap {
    CornerConfig config;
    DerivedParams derived;
    SeriesCoefficients coeffs;
};

// Validates config and coefficients, derives (mu, phi_star).
HarmonicCornerMap make_map(const CornerConfig& cfg, const SeriesCoefficients& coeffs);

// psi_n(r, phi) = Im[(i z^{1/beta})^n] = r^{n/beta} sin(n (phi/beta + pi/2)).
// Vanishes identically on both straight sides.
double basis_psi(int n, double beta, double r, double phi);

// F(r e^{i phi}) as u + i v.  Throws validation_error outside the closed
// sector (r in [0, R], |phi| <= pi*beta/2).
std::complex<double> evaluate(const HarmonicCornerMap& m, double r, double phi);
// Same map at the Cartesian point z = x + i y.
std::complex<double> evaluate(const HarmonicCornerMap& m, std::complex<double> z);

// d(u,v)/d(x,y) by analytic differentiation through polar coordinates.
// At the vertex r = 0 with beta > 1 the series derivatives blow up; the
// returned matrix then contains only the (constant) gradient of Q and
// singular_at_vertex is set instead of throwing.
struct Jacobian {
    double du_dx = 0.0, du_dy = 0.0;
    double dv_dx = 0.0, dv_dy = 0.0;
    bool singular_at_vertex = false;

    double det() const { return du_dx * dv_dy - du_dy * dv_dx; }
};

Jacobian jacobian(const HarmonicCornerMap& m, double r, double phi);

// One boundary sample on the arc r = R.
struct ArcSample {
    double phi = 0.0;
    std::complex<double> value;
};

struct FitOptions {
    int simpson_panels = 2048;    // composite-Simpson panel count over t in [0, pi]
    double endpoint_tol = 1e-6;   // allowed side-data mismatch at the arc ends (relative)
    double degenerate_tol = 1e-10; // admissibility floor for |a_1| and b_1 (relative)
};

// Sine-series projection of the arc data:  with t = phi/beta + pi/2 in [0, pi],
//   a_n + i b_n = (2/pi) R^{-n/beta} Int_0^pi [F_arc - Q](t) sin(n t) dt,
// evaluated by composite Simpson quadrature on a linear interpolant of the
// samples.  Samples must cover the arc densely (>= 8 n_terms points spanning
// at least 98% of it) and agree with the side data at the arc endpoints.
// Throws validation_error on a degenerate fit (b_1 <= 0 or a_1 ~ 0).
SeriesCoefficients fit_from_arc(const CornerConfig& cfg, const DerivedParams& d,
                                std::vector<ArcSample> samples, int n_terms,
                                const FitOptions& opt = {});

// Max over a fixed interior sample set of the 5-point discrete Laplacian of
// both components at step h.  The series is exactly harmonic, so this decays
// as O(h^2); used as a consistency check.
double harmonicity_residual(const HarmonicCornerMap& m, double h);

} // namespace cornermap
