#pragma once

#include "cornermap/errors.hpp"

namespace cornermap {

// A corner of opening angle pi*beta at the origin, viewed through the sector
//   S = { r in (0,R), phi in (-pi*beta/2, +pi*beta/2) }.
// The boundary data on the two straight sides is linear in arclength:
//   u = +sigma_plus  * r on L+ = { phi = -pi*beta/2 },
//   u = -sigma_minus * r on L- = { phi = +pi*beta/2 },   v = 0 on both.
struct CornerConfig {
    double beta = 0.0;        // opening factor; valid range (0,1) U (1,2)
    double sigma_plus = 0.0;  // boundary speed on L+, > 0
    double sigma_minus = 0.0; // boundary speed on L-, > 0
    double radius = 0.0;      // sector radius R, > 0
};

// Throws validation_error unless beta in (0,1) U (1,2) and all of
// sigma_plus, sigma_minus, radius are positive and finite.
void validate_config(const CornerConfig& cfg);

// Half opening angle pi*beta/2.
double half_angle(const CornerConfig& cfg);

// Parameters of the linear part Q: amplitude mu > 0 and the preferred
// direction phi_star in (-pi*beta/2, +pi*beta/2).
struct DerivedParams {
    double mu = 0.0;
    double phi_star = 0.0;
};

// mu = |sin(pi beta)|^-1 * sqrt(sigma+^2 + sigma-^2 + 2 sigma+ sigma- cos(pi beta)),
// phi_star = arctan( (sigma+ - sigma-)/(sigma+ + sigma-) * tan(pi beta / 2) ).
DerivedParams derive_params(const CornerConfig& cfg);

// Q(r e^{i phi}) = -mu r sin(phi - phi_star).  Reproduces the side data:
// Q = sigma_plus * r at phi = -pi*beta/2 and Q = -sigma_minus * r at +pi*beta/2.
// Throws validation_error if r < 0 or phi lies outside the closed sector.
double linear_part_q(const CornerConfig& cfg, const DerivedParams& d, double r, double phi);

} // namespace cornermap
