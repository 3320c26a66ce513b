#include "cornermap/corner_asymptotics.hpp"

#include "cornermap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cornermap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Relative threshold deciding when a ray angle counts as the exceptional one.
constexpr double kStarBranchTol = 1e-8;

bool on_star_branch(const AsymptoticKit& kit, double theta) {
    const double a1 = kit.map.coeffs.a1();
    const double b1 = kit.map.coeffs.b1();
    return std::abs(a1 - b1 / std::tan(theta)) < kStarBranchTol * std::hypot(a1, b1);
}

void check_theta_open(double theta) {
    if (!std::isfinite(theta) || theta <= 0.0 || theta >= kPi)
        throw validation_error("theta must lie in (0, pi)");
}

double leading_norm(const SeriesCoefficients& c, double p) {
    return std::pow(c.a1() * c.a1() + c.b1() * c.b1(), p);
}

} // namespace

double theta_star_angle(double a1, double b1) {
    if (!(b1 > 0.0) || a1 == 0.0 || !std::isfinite(a1))
        throw validation_error("theta_star_angle requires b1 > 0 and a1 != 0");
    return std::atan2(b1, a1);
}

AsymptoticKit make_kit(const HarmonicCornerMap& m) {
    AsymptoticKit kit;
    kit.map = m;
    kit.theta_star = theta_star_angle(m.coeffs.a1(), m.coeffs.b1());
    const double beta = m.config.beta;
    kit.gamma = beta < 1.0 ? 2.0 / beta - 2.0
                           : std::min(1.0 / beta, 2.0 * (1.0 - 1.0 / beta));
    kit.r_max_asym = 0.1 * m.config.radius;
    return kit;
}

double e1_of_theta(const AsymptoticKit& kit, double theta) {
    check_theta_open(theta);
    const auto& c = kit.map.coeffs;
    return (c.a1() - c.b1() / std::tan(theta)) *
           std::cos(kit.map.derived.phi_star / kit.map.config.beta) / kit.map.derived.mu;
}

double e1_star(const AsymptoticKit& kit) {
    const auto& c = kit.map.coeffs;
    const double a2 = c.a[1];
    const double b2 = c.b[1];
    return -(a2 - b2 / std::tan(kit.theta_star)) *
           std::sin(2.0 * kit.map.derived.phi_star / kit.map.config.beta) / kit.map.derived.mu;
}

double f1_of_theta(const AsymptoticKit& kit, double theta) {
    check_theta_open(theta);
    const auto& c = kit.map.coeffs;
    return kit.map.derived.mu / (c.a1() - c.b1() / std::tan(theta));
}

AsymValue phi_theta_asym(const AsymptoticKit& kit, double r, double theta) {
    if (!std::isfinite(r) || r < 0.0)
        throw validation_error("phi_theta_asym: r must be finite and >= 0");
    const double beta = kit.map.config.beta;
    const double hb = half_angle(kit.map.config);
    const double phi_star = kit.map.derived.phi_star;

    AsymValue out;
    out.in_asym_range = r <= kit.r_max_asym;

    double raw;
    if (beta < 1.0) {
        if (theta == 0.0) {
            raw = -hb;
        } else if (theta == kPi) {
            raw = hb;
        } else {
            check_theta_open(theta);
            raw = on_star_branch(kit, theta)
                      ? phi_star + e1_star(kit) * std::pow(r, 2.0 / beta - 1.0)
                      : phi_star + e1_of_theta(kit, theta) * std::pow(r, 1.0 / beta - 1.0);
        }
    } else {
        if (theta == 0.0 || theta == kPi)
            throw validation_error("phi_theta_asym: theta in {0, pi} has no expansion for beta > 1");
        check_theta_open(theta);
        if (on_star_branch(kit, theta)) {
            raw = phi_star + e1_star(kit) * std::pow(r, 2.0 / beta - 1.0);
        } else {
            const double amp = beta * f1_of_theta(kit, theta) * std::pow(r, 1.0 - 1.0 / beta);
            raw = theta < kit.theta_star ? -hb - amp * std::sin(hb + phi_star)
                                         : hb - amp * std::sin(hb - phi_star);
        }
    }

    out.value = std::clamp(raw, -hb, hb);
    out.clamped = out.value != raw;
    return out;
}

double phi_of_theta(const AsymptoticKit& kit, double theta) {
    const double beta = kit.map.config.beta;
    const double hb = half_angle(kit.map.config);
    if (beta < 1.0) {
        if (theta == 0.0) return -hb;
        if (theta == kPi) return hb;
        check_theta_open(theta);
        return kit.map.derived.phi_star;
    }
    if (theta == 0.0 || theta == kPi)
        throw validation_error("phi_of_theta: theta in {0, pi} has no limit law for beta > 1");
    check_theta_open(theta);
    if (on_star_branch(kit, theta)) return kit.map.derived.phi_star;
    return theta < kit.theta_star ? -hb : hb;
}

double theta_of_phi(const AsymptoticKit& kit, double phi) {
    const double beta = kit.map.config.beta;
    const double hb = half_angle(kit.map.config);
    if (!std::isfinite(phi) || std::abs(phi) > hb * (1.0 + 1e-12))
        throw validation_error("theta_of_phi: phi outside the sector");
    const double phi_star = kit.map.derived.phi_star;
    if (beta < 1.0) {
        if (phi == phi_star) return kit.theta_star;
        return phi < phi_star ? 0.0 : kPi;
    }
    if (std::abs(phi + hb) <= 1e-12 * hb) return 0.0;
    if (std::abs(phi - hb) <= 1e-12 * hb) return kPi;
    return kit.theta_star;
}

AngleLaw phi_of_theta_law(const AsymptoticKit& kit) {
    const double beta = kit.map.config.beta;
    const double hb = half_angle(kit.map.config);
    const double phi_star = kit.map.derived.phi_star;

    AngleLaw law;
    law.kind = AngleLaw::Kind::phi_of_theta;
    law.beta = beta;
    if (beta < 1.0) {
        law.pieces = {{0.0, 0.0, true, true, -hb},
                      {0.0, kPi, false, false, phi_star},
                      {kPi, kPi, true, true, hb}};
        law.has_interior_jump = false;
    } else {
        law.pieces = {{0.0, kit.theta_star, false, false, -hb},
                      {kit.theta_star, kit.theta_star, true, true, phi_star},
                      {kit.theta_star, kPi, false, false, hb}};
        law.has_interior_jump = true;
        law.jump_location = kit.theta_star;
        law.jump_magnitude = 2.0 * hb;
    }
    return law;
}

AngleLaw theta_of_phi_law(const AsymptoticKit& kit) {
    const double beta = kit.map.config.beta;
    const double hb = half_angle(kit.map.config);
    const double phi_star = kit.map.derived.phi_star;

    AngleLaw law;
    law.kind = AngleLaw::Kind::theta_of_phi;
    law.beta = beta;
    if (beta < 1.0) {
        law.pieces = {{-hb, phi_star, true, false, 0.0},
                      {phi_star, phi_star, true, true, kit.theta_star},
                      {phi_star, hb, false, true, kPi}};
        law.has_interior_jump = true;
        law.jump_location = phi_star;
        law.jump_magnitude = kPi;
    } else {
        law.pieces = {{-hb, -hb, true, true, 0.0},
                      {-hb, hb, false, false, kit.theta_star},
                      {hb, hb, true, true, kPi}};
        law.has_interior_jump = false;
    }
    return law;
}

namespace {

// Shared guards for the forward power laws.
void check_ray_angle(const AsymptoticKit& kit, double phi) {
    const double hb = half_angle(kit.map.config);
    if (!std::isfinite(phi) || std::abs(phi) > hb * (1.0 + 1e-12))
        throw validation_error("forward law: phi outside the sector");
}

bool on_star_ray(const AsymptoticKit& kit, double phi) {
    return std::abs(phi - kit.map.derived.phi_star) < 1e-12;
}

double c20_constant(const AsymptoticKit& kit) {
    const auto& c = kit.map.coeffs;
    const double a2 = c.a[1];
    const double b2 = c.b[1];
    return 2.0 * (a2 * c.b1() - c.a1() * b2) *
           std::tan(kit.map.derived.phi_star / kit.map.config.beta) /
           leading_norm(c, 1.5);
}

double c21_constant(const AsymptoticKit& kit, double phi) {
    const double beta = kit.map.config.beta;
    const double cosine = std::cos(phi / beta);
    if (std::abs(cosine) < 1e-12)
        throw validation_error("forward law: side ray is a singular direction");
    const auto& c = kit.map.coeffs;
    return kit.map.derived.mu * c.b1() * std::sin(phi - kit.map.derived.phi_star) /
           (leading_norm(c, (beta + 1.0) / 2.0) * std::pow(cosine, beta));
}

} // namespace

double forward_curve_cartesian(const AsymptoticKit& kit, double abscissa, double phi) {
    check_ray_angle(kit, phi);
    const double beta = kit.map.config.beta;
    const auto& c = kit.map.coeffs;
    if (beta < 1.0) {
        if (on_star_ray(kit, phi)) return c.b1() / c.a1() * abscissa;
        const double denom = std::pow(
            kit.map.derived.mu * std::abs(std::sin(phi - kit.map.derived.phi_star)), 1.0 / beta);
        return c.b1() * std::cos(phi / beta) / denom * std::pow(std::abs(abscissa), 1.0 / beta);
    }
    if (on_star_ray(kit, phi)) return c20_constant(kit) * abscissa * abscissa;
    return c21_constant(kit, phi) * std::pow(std::abs(abscissa), beta);
}

double forward_curve_polar(const AsymptoticKit& kit, double rho, double phi) {
    const double beta = kit.map.config.beta;
    if (beta <= 1.0)
        throw validation_error("forward_curve_polar: defined for beta in (1, 2) only");
    check_ray_angle(kit, phi);
    if (!std::isfinite(rho) || rho < 0.0)
        throw validation_error("forward_curve_polar: rho must be finite and >= 0");
    if (on_star_ray(kit, phi)) return kit.theta_star + c20_constant(kit) * rho;
    return kit.theta_star + c21_constant(kit, phi) * std::pow(rho, beta - 1.0);
}

std::complex<double> conformal_reference(double beta, double r, double phi) {
    if (!(beta > 0.0) || !std::isfinite(r) || r < 0.0)
        throw validation_error("conformal_reference: invalid arguments");
    return std::polar(std::pow(r, 1.0 / beta), conformal_theta_of_phi(beta, phi));
}

double conformal_theta_of_phi(double beta, double phi) {
    return phi / beta + kPi / 2.0;
}

double conformal_phi_of_theta(double beta, double theta) {
    return beta * (theta - kPi / 2.0);
}

} // namespace cornermap
