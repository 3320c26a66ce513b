#pragma once

#include "cornermap/corner_asymptotics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cornermap {

// A curve sampled on a log-spaced parameter grid decreasing toward 0.
// Inverse level curves: parameter = r, ordinate = phi(r) with F(r e^{i phi}) on
// the image ray at angle theta_or_phi.  Forward ray images: parameter = rho =
// |F|, ordinate = theta = arg F along the domain ray at angle theta_or_phi.
struct TracedCurve {
    enum class Kind { inverse_level_curve, forward_ray_image };
    Kind kind = Kind::inverse_level_curve;
    double theta_or_phi = 0.0;
    std::vector<double> parameter;
    std::vector<double> ordinate;
    std::vector<std::complex<double>> z; // domain sample points
    std::vector<std::complex<double>> w; // their images
};

struct ExitAngleEstimate {
    double limit_angle = 0.0;
    std::optional<double> order_estimate; // empty when the curve is exactly constant
    double fit_residual = 0.0;
};

struct DiscrepancyReport {
    double max_abs = 0.0;
    double rms = 0.0;
    double remainder_exponent = 0.0;          // NaN when the deviation is at noise level
    double expected_remainder_exponent = 0.0; // NaN when only o(.) is known
};

struct Polyline {
    std::string label;
    std::vector<std::complex<double>> points;
};

struct MeshImages {
    std::vector<Polyline> curves;
    std::vector<std::string> warnings;
};

// Polar grid of 5 circles/arcs and 8 rays, on either plane.
struct PolarMeshSpec {
    enum class Plane { image_w, domain_z };
    Plane plane = Plane::image_w;
    double scale = 1.0;          // outermost circle/arc radius
    int points_per_curve = 201;
};

// Descending radii, `per_decade` samples per decade from rmax down to rmin.
std::vector<double> log_spaced_radii(double rmin, double rmax, int per_decade = 48);

// Traces phi(r) with Im[F(r e^{i phi}) e^{-i theta}] = 0 by bisection, seeding
// each bracket from the previous (larger-r) root with a widening window so the
// same branch is followed.  radii must be strictly decreasing within (0, R).
TracedCurve trace_inverse_ray(const HarmonicCornerMap& map, double theta,
                              const std::vector<double>& radii);

// Evaluates w = F(r e^{i phi}) along the ray; parameter = |w|, ordinate = arg w.
TracedCurve trace_forward_ray(const HarmonicCornerMap& map, double phi,
                              const std::vector<double>& radii);

// Fits ordinate ~ A + C r^p with A drawn from the closed-form candidate angles
// {-pi beta/2, phi*, +pi beta/2, theta*, 0, pi}; returns the candidate whose
// log-log fit has the smallest RMS residual among fits with positive slope.
ExitAngleEstimate estimate_exit_angle(const TracedCurve& curve, const AsymptoticKit& kit);

// Max/RMS deviation of the traced ordinates from the leading-order predictions,
// over samples with parameter <= r_max_asym, plus the measured decay exponent
// of the deviation against the known remainder exponent.
DiscrepancyReport compare_with_asymptotics(const TracedCurve& curve, const AsymptoticKit& kit);

// The grid curves themselves (no map involved): 5 circles rho = s n/5 plus 8
// rays theta = pi n/7 on the image plane, or 5 arcs r = s n/5 plus 8 rays
// phi = (pi beta / 2)(2n/7 - 1) on the domain sector.
std::vector<Polyline> polar_mesh(const PolarMeshSpec& spec, double beta);

// Largest image-plane radius whose full semicircle stays inside F(half sector);
// used as the default scale of the image-plane grid.
double default_xi_scale(const HarmonicCornerMap& map);

// Preimages F^{-1}(Xi) (image-plane spec) or images F(T) (domain-plane spec).
// Side rays theta in {0, pi} come from boundary data for beta < 1 and are
// skipped with a warning for beta > 1; failed root finds truncate polylines.
MeshImages mesh_images(const HarmonicCornerMap& map, const PolarMeshSpec& spec);

} // namespace cornermap
