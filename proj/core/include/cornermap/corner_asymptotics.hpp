#pragma once

#include "cornermap/harmonic_map.hpp"

#include <vector>

namespace cornermap {

// One constant piece of an exit-angle law.  Point pieces have lo == hi.
struct AngleLawPiece {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = true;
    double value = 0.0;
};

// Piecewise-constant correspondence between a ray angle and the exit angle of
// its (pre)image at the corner.  At most 3 pieces; an interior jump sits at
// theta_star (phi_of_theta) or phi_star (theta_of_phi) when present.
struct AngleLaw {
    enum class Kind { phi_of_theta, theta_of_phi };
    Kind kind = Kind::phi_of_theta;
    double beta = 0.0;
    std::vector<AngleLawPiece> pieces;
    bool has_interior_jump = false;
    double jump_location = 0.0;
    double jump_magnitude = 0.0;
};

// All closed-form asymptotic constants of a map, plus the map itself.
struct AsymptoticKit {
    HarmonicCornerMap map;
    double theta_star = 0.0;  // in (0, pi); the exceptional image-ray angle
    double gamma = 0.0;       // absolute remainder exponent of the side-hugging laws
    double r_max_asym = 0.0;  // advertised validity radius of the r -> 0 formulas
};

// The unique theta in (0, pi) with cot(theta) = a1/b1.  Requires b1 > 0, a1 != 0.
double theta_star_angle(double a1, double b1);

AsymptoticKit make_kit(const HarmonicCornerMap& m);

// E1(theta)  = mu^-1 (a1 - b1 cot theta) cos(phi_star/beta)       (theta in (0,pi), != theta_star)
// E1*        = -mu^-1 (a2 - b2 cot theta_star) sin(2 phi_star/beta)
// F1(theta)  = mu / (a1 - b1 cot theta)
// The sign of E1* follows the psi_n basis convention (psi_2 = -r^{2/beta} sin(2phi/beta)),
// validated against the curve tracer.
double e1_of_theta(const AsymptoticKit& kit, double theta);
double e1_star(const AsymptoticKit& kit);
double f1_of_theta(const AsymptoticKit& kit, double theta);

// Leading-order inverse-curve angle phi_theta(r) with range tagging: values
// are clamped to the closed sector, and in_asym_range marks r <= r_max_asym.
struct AsymValue {
    double value = 0.0;
    bool in_asym_range = true;
    bool clamped = false;
};

// beta in (0,1): phi* + E1 r^{1/beta-1} for interior theta, exact side values
// at theta in {0, pi}, and phi* + E1* r^{2/beta-1} on the theta_star branch.
// beta in (1,2): -hb - [beta F1 sin(hb+phi*)] r^{1-1/beta} below theta_star,
// the E1* branch at theta_star, +hb - [beta F1 sin(hb-phi*)] r^{1-1/beta}
// above; theta in {0, pi} is refused (no exact side identity applies).
// The theta_star branch engages when |a1 - b1 cot theta| < 1e-8 sqrt(a1^2+b1^2).
AsymValue phi_theta_asym(const AsymptoticKit& kit, double r, double theta);

// The r -> 0 limits of the above: discontinuous exit-angle laws.
double phi_of_theta(const AsymptoticKit& kit, double theta);
double theta_of_phi(const AsymptoticKit& kit, double phi);
AngleLaw phi_of_theta_law(const AsymptoticKit& kit);
AngleLaw theta_of_phi_law(const AsymptoticKit& kit);

// Leading-order ordinate of the forward ray image near the vertex image.
// beta in (0,1) (axes (u,v)):    v = [b1 cos(phi/beta) / (mu |sin(phi-phi*)|)^{1/beta}] |u|^{1/beta},
//                                 or v = (b1/a1) u on the phi_star ray.
// beta in (1,2) (axes rotated by theta_star):
//   V = [2 (a2 b1 - a1 b2) tan(phi*/beta) / (a1^2+b1^2)^{3/2}] U^2 on the phi_star ray,
//   V = [mu b1 sin(phi-phi*) / ((a1^2+b1^2)^{(beta+1)/2} cos^beta(phi/beta))] U^beta otherwise.
// The quadratic coefficient's numerator sign follows the psi_n convention.
double forward_curve_cartesian(const AsymptoticKit& kit, double abscissa, double phi);

// Polar form of the forward laws, beta in (1,2) only:
//   theta(rho) = theta* + C20 rho        on the phi_star ray,
//   theta(rho) = theta* + C21 rho^{beta-1} otherwise.
double forward_curve_polar(const AsymptoticKit& kit, double rho, double phi);

// Conformal reference K(z) = (e^{i pi beta/2} z)^{1/beta}: maps the sector onto
// a half-plane patch with continuous, linear angle laws.
std::complex<double> conformal_reference(double beta, double r, double phi);
double conformal_theta_of_phi(double beta, double phi); // phi/beta + pi/2
double conformal_phi_of_theta(double beta, double theta); // beta theta - pi beta/2

} // namespace cornermap
