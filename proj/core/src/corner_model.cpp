#include "cornermap/corner_model.hpp"

#include <cmath>

namespace cornermap {

void validate_config(const CornerConfig& cfg) {
    if (!std::isfinite(cfg.beta) || cfg.beta <= 0.0 || cfg.beta >= 2.0 || cfg.beta == 1.0)
        throw validation_error("beta must lie in (0,1) U (1,2)");
    if (!std::isfinite(cfg.sigma_plus) || cfg.sigma_plus <= 0.0)
        throw validation_error("sigma_plus must be positive");
    if (!std::isfinite(cfg.sigma_minus) || cfg.sigma_minus <= 0.0)
        throw validation_error("sigma_minus must be positive");
    if (!std::isfinite(cfg.radius) || cfg.radius <= 0.0)
        throw validation_error("radius must be positive");
}

double half_angle(const CornerConfig& cfg) {
    return 0.5 * M_PI * cfg.beta;
}

DerivedParams derive_params(const CornerConfig& cfg) {
    validate_config(cfg);
    const double sp = cfg.sigma_plus, sm = cfg.sigma_minus;
    const double pb = M_PI * cfg.beta;
    DerivedParams d;
    d.mu = std::sqrt(sp * sp + sm * sm + 2.0 * sp * sm * std::cos(pb)) / std::abs(std::sin(pb));
    d.phi_star = std::atan((sp - sm) / (sp + sm) * std::tan(0.5 * pb));
    return d;
}

double linear_part_q(const CornerConfig& cfg, const DerivedParams& d, double r, double phi) {
    const double hb = half_angle(cfg);
    if (!(r >= 0.0))
        throw validation_error("linear_part_q: r must be non-negative");
    if (std::abs(phi) > hb * (1.0 + 1e-12) + 1e-15)
        throw validation_error("linear_part_q: phi outside the closed sector");
    return -d.mu * r * std::sin(phi - d.phi_star);
}

} // namespace cornermap
