#include "cornermap/curve_tracer.hpp"

#include "cornermap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cornermap {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_radius(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", r);
    return buf;
}

void check_radii(const std::vector<double>& radii, double R) {
    if (radii.empty())
        throw validation_error("tracer: empty radius list");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !(radii[i] < R))
            throw validation_error("tracer: radii must lie in (0, R)");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw validation_error("tracer: radii must be strictly decreasing");
    }
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) { xm += x[i]; ym += y[i]; }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += e * e;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

bool near_star_branch(const AsymptoticKit& kit, double theta) {
    const double a1 = kit.map.coeffs.a1();
    const double b1 = kit.map.coeffs.b1();
    return std::abs(a1 - b1 / std::tan(theta)) < 1e-8 * std::hypot(a1, b1);
}

} // namespace

std::vector<double> log_spaced_radii(double rmin, double rmax, int per_decade) {
    if (!(rmin > 0.0) || !(rmax > rmin) || per_decade < 1)
        throw validation_error("log_spaced_radii: need 0 < rmin < rmax and per_decade >= 1");
    const int n = static_cast<int>(std::ceil(std::log10(rmax / rmin) * per_decade)) + 1;
    const double e0 = std::log10(rmax);
    const double e1 = std::log10(rmin);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            std::pow(10.0, e0 + (e1 - e0) * i / static_cast<double>(n - 1));
    return out;
}

TracedCurve trace_inverse_ray(const HarmonicCornerMap& map, double theta,
                              const std::vector<double>& radii) {
    if (!std::isfinite(theta) || theta <= 0.0 || theta >= kPi)
        throw validation_error("trace_inverse_ray: theta must lie in (0, pi)");
    check_radii(radii, map.config.radius);

    const double hb = half_angle(map.config);
    const double span = 2.0 * hb;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);

    TracedCurve out;
    out.kind = TracedCurve::Kind::inverse_level_curve;
    out.theta_or_phi = theta;
    out.parameter.reserve(radii.size());
    out.ordinate.reserve(radii.size());
    out.z.reserve(radii.size());
    out.w.reserve(radii.size());

    bool have_prev = false, have_inc = false;
    double prev = 0.0, prev_inc = 0.0;

    for (double r : radii) {
        auto g = [&](double phi) {
            const auto w = evaluate(map, std::polar(r, phi));
            return w.imag() * ct - w.real() * st;
        };

        double lo, hi;
        if (!have_prev) {
            // Global scan at the outermost radius; take the first sign change.
            constexpr int kScan = 801;
            bool found = false;
            double px = -hb, pg = g(px);
            lo = hi = px;
            for (int i = 1; i < kScan && !found; ++i) {
                const double x = -hb + span * i / (kScan - 1);
                const double gx = g(x);
                if ((pg < 0.0 && gx > 0.0) || (pg > 0.0 && gx < 0.0)) {
                    lo = px;
                    hi = x;
                    found = true;
                }
                px = x;
                pg = gx;
            }
            if (!found)
                throw solver_error("trace_inverse_ray: no root bracket at r=" + format_radius(r));
        } else {
            // Follow the branch: widen a window around the previous root.
            double w = have_inc ? std::max(1e-9, 4.0 * std::abs(prev_inc)) : 0.05 * span;
            for (;;) {
                lo = std::max(prev - w, -hb);
                hi = std::min(prev + w, hb);
                if (g(lo) * g(hi) <= 0.0) break;
                w *= 2.0;
                if (w >= 4.0 * span)
                    throw solver_error("trace_inverse_ray: branch lost at r=" + format_radius(r));
            }
        }

        double glo = g(lo);
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if (glo * gm <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                glo = gm;
            }
        }
        const double root = 0.5 * (lo + hi);

        if (have_prev) {
            prev_inc = root - prev;
            have_inc = true;
        }
        prev = root;
        have_prev = true;

        const auto zpt = std::polar(r, root);
        out.parameter.push_back(r);
        out.ordinate.push_back(root);
        out.z.push_back(zpt);
        out.w.push_back(evaluate(map, zpt));
    }
    return out;
}

TracedCurve trace_forward_ray(const HarmonicCornerMap& map, double phi,
                              const std::vector<double>& radii) {
    const double hb = half_angle(map.config);
    if (!std::isfinite(phi) || std::abs(phi) > hb * (1.0 + 1e-12))
        throw validation_error("trace_forward_ray: phi outside the sector");
    check_radii(radii, map.config.radius);

    TracedCurve out;
    out.kind = TracedCurve::Kind::forward_ray_image;
    out.theta_or_phi = phi;
    out.parameter.reserve(radii.size());
    out.ordinate.reserve(radii.size());
    out.z.reserve(radii.size());
    out.w.reserve(radii.size());
    for (double r : radii) {
        const auto zpt = std::polar(r, phi);
        const auto w = evaluate(map, zpt);
        out.parameter.push_back(std::abs(w));
        out.ordinate.push_back(std::atan2(w.imag(), w.real()));
        out.z.push_back(zpt);
        out.w.push_back(w);
    }
    return out;
}

ExitAngleEstimate estimate_exit_angle(const TracedCurve& curve, const AsymptoticKit& kit) {
    const auto& rs = curve.parameter;
    const auto& os = curve.ordinate;
    if (rs.size() < 12)
        throw validation_error("estimate_exit_angle: need at least 12 samples");
    if (!(rs.front() / rs.back() >= 100.0 * (1.0 - 1e-12)))
        throw validation_error("estimate_exit_angle: samples must span at least 2 decades");

    const double hb = half_angle(kit.map.config);
    const double candidates[6] = {-hb, kit.map.derived.phi_star, hb, kit.theta_star, 0.0, kPi};

    std::vector<double> x(rs.size()), y(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) x[i] = std::log(rs[i]);

    constexpr double kMinSlope = 0.02;
    bool have_best = false;
    ExitAngleEstimate best;
    for (double A : candidates) {
        double maxd = 0.0, mind = std::numeric_limits<double>::infinity();
        for (double o : os) {
            const double d = std::abs(o - A);
            maxd = std::max(maxd, d);
            mind = std::min(mind, d);
        }
        if (maxd < 1e-10) {
            ExitAngleEstimate exact;
            exact.limit_angle = A;
            exact.order_estimate.reset();
            exact.fit_residual = 0.0;
            return exact;
        }
        if (mind <= 0.0) continue;
        for (std::size_t i = 0; i < os.size(); ++i) y[i] = std::log(std::abs(os[i] - A));
        const LineFit fit = fit_line(x, y);
        if (fit.slope > kMinSlope && (!have_best || fit.rms < best.fit_residual)) {
            best.limit_angle = A;
            best.order_estimate = fit.slope;
            best.fit_residual = fit.rms;
            have_best = true;
        }
    }
    if (!have_best)
        throw validation_error("estimate_exit_angle: no candidate limit admits a power-law fit");
    if (best.fit_residual > 0.1)
        throw validation_error("estimate_exit_angle: poor fit (rms residual > 0.1)");
    return best;
}

DiscrepancyReport compare_with_asymptotics(const TracedCurve& curve, const AsymptoticKit& kit) {
    const double beta = kit.map.config.beta;
    const double hb = half_angle(kit.map.config);
    const bool inverse = curve.kind == TracedCurve::Kind::inverse_level_curve;
    const bool boundary_ray = !inverse && std::abs(std::abs(curve.theta_or_phi) - hb) <= 1e-12 * hb;

    std::vector<double> rs, devs;
    for (std::size_t i = 0; i < curve.parameter.size(); ++i) {
        const double p = curve.parameter[i];
        if (p > kit.r_max_asym) continue;
        double pred;
        if (inverse) {
            pred = phi_theta_asym(kit, p, curve.theta_or_phi).value;
        } else if (boundary_ray) {
            pred = curve.theta_or_phi < 0.0 ? 0.0 : kPi;
        } else if (beta > 1.0) {
            pred = forward_curve_polar(kit, p, curve.theta_or_phi);
        } else {
            pred = theta_of_phi(kit, curve.theta_or_phi);
        }
        rs.push_back(p);
        devs.push_back(std::abs(curve.ordinate[i] - pred));
    }
    if (rs.empty())
        throw validation_error("compare_with_asymptotics: no samples within r_max_asym");

    DiscrepancyReport rep;
    double ss = 0.0;
    for (double d : devs) {
        rep.max_abs = std::max(rep.max_abs, d);
        ss += d * d;
    }
    rep.rms = std::sqrt(ss / static_cast<double>(devs.size()));

    if (inverse && !near_star_branch(kit, curve.theta_or_phi))
        rep.expected_remainder_exponent = beta < 1.0 ? 2.0 / beta - 2.0 : kit.gamma;
    else
        rep.expected_remainder_exponent = kNaN; // only o(.) information available

    rep.remainder_exponent = kNaN;
    if (rep.max_abs >= 1e-13) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (devs[i] > 0.0) {
                x.push_back(std::log(rs[i]));
                y.push_back(std::log(devs[i]));
            }
        }
        if (x.size() >= 2) rep.remainder_exponent = fit_line(x, y).slope;
    }
    return rep;
}

std::vector<Polyline> polar_mesh(const PolarMeshSpec& spec, double beta) {
    if (!(spec.scale > 0.0) || spec.points_per_curve < 2)
        throw validation_error("polar_mesh: need scale > 0 and points_per_curve >= 2");
    const int P = spec.points_per_curve;
    std::vector<Polyline> out;
    out.reserve(13);
    if (spec.plane == PolarMeshSpec::Plane::image_w) {
        for (int n = 1; n <= 5; ++n) {
            Polyline c;
            c.label = "xi_circle_" + std::to_string(n);
            const double rho = spec.scale * n / 5.0;
            for (int k = 0; k < P; ++k)
                c.points.push_back(std::polar(rho, kPi * k / (P - 1)));
            out.push_back(std::move(c));
        }
        for (int n = 0; n <= 7; ++n) {
            Polyline c;
            c.label = "xi_ray_" + std::to_string(n);
            const double th = kPi * n / 7.0;
            for (int k = 0; k < P; ++k)
                c.points.push_back(std::polar(spec.scale * k / (P - 1), th));
            out.push_back(std::move(c));
        }
    } else {
        if (!(beta > 0.0) || !(beta < 2.0))
            throw validation_error("polar_mesh: domain grid needs beta in (0, 2)");
        const double hb = kPi * beta / 2.0;
        for (int n = 1; n <= 5; ++n) {
            Polyline c;
            c.label = "t_arc_" + std::to_string(n);
            const double r = spec.scale * n / 5.0;
            for (int k = 0; k < P; ++k)
                c.points.push_back(std::polar(r, -hb + 2.0 * hb * k / (P - 1)));
            out.push_back(std::move(c));
        }
        for (int n = 0; n <= 7; ++n) {
            Polyline c;
            c.label = "t_ray_" + std::to_string(n);
            const double ph = hb * (2.0 * n / 7.0 - 1.0);
            for (int k = 0; k < P; ++k)
                c.points.push_back(std::polar(spec.scale * k / (P - 1), ph));
            out.push_back(std::move(c));
        }
    }
    return out;
}

double default_xi_scale(const HarmonicCornerMap& map) {
    const double hb = half_angle(map.config);
    const double r = 0.5 * map.config.radius;
    double s = std::numeric_limits<double>::infinity();
    constexpr int kProbe = 721;
    for (int k = 0; k < kProbe; ++k) {
        const double phi = -hb + 2.0 * hb * k / (kProbe - 1);
        s = std::min(s, std::abs(evaluate(map, std::polar(r, phi))));
    }
    return s;
}

namespace {

// Preimage of a single ray of the image grid, truncated to |F| <= scale.
// Retries with a smaller outer radius when the trace fails far from the vertex.
void add_ray_preimage(const HarmonicCornerMap& map, double theta, double scale,
                      const std::string& label, MeshImages& out) {
    const double R = map.config.radius;
    double rmax = 0.999 * R;
    const double rmin = 1e-5 * R;
    for (int attempt = 0; attempt < 12; ++attempt) {
        try {
            const TracedCurve tc = trace_inverse_ray(map, theta, log_spaced_radii(rmin, rmax));
            Polyline c;
            c.label = label;
            for (std::size_t i = tc.z.size(); i-- > 0;)
                if (std::abs(tc.w[i]) <= scale) c.points.push_back(tc.z[i]);
            if (attempt > 0)
                out.warnings.push_back(label + ": trace truncated to r <= " + format_radius(rmax));
            if (c.points.size() < 2) {
                out.warnings.push_back(label + ": preimage empty within the grid radius; skipped");
                return;
            }
            out.curves.push_back(std::move(c));
            return;
        } catch (const solver_error&) {
            rmax *= 0.5;
            if (rmax <= 10.0 * rmin) break;
        }
    }
    out.warnings.push_back(label + ": no root bracket found; skipped");
}

// Preimage of a circle |w| = rho: one radial root find per sector angle.
void add_circle_preimage(const HarmonicCornerMap& map, double rho, int points,
                         const std::string& label, MeshImages& out) {
    const double R = map.config.radius;
    const double hb = half_angle(map.config);
    Polyline c;
    c.label = label;
    int misses = 0;
    constexpr int kScan = 97;
    const double e0 = std::log10(1e-8 * R);
    const double e1 = std::log10(0.999 * R);
    for (int k = 0; k < points; ++k) {
        const double phi = -hb + 2.0 * hb * k / (points - 1);
        auto h = [&](double r) { return std::abs(evaluate(map, std::polar(r, phi))) - rho; };
        double lo = 0.0, hi = 0.0;
        bool found = false;
        double pr = std::pow(10.0, e0), ph = h(pr);
        for (int s = 1; s < kScan && !found; ++s) {
            const double r = std::pow(10.0, e0 + (e1 - e0) * s / (kScan - 1));
            const double hr = h(r);
            if (ph < 0.0 && hr >= 0.0) {
                lo = pr;
                hi = r;
                found = true;
            }
            pr = r;
            ph = hr;
        }
        if (!found) {
            ++misses;
            continue;
        }
        double hlo = h(lo);
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double hm = h(mid);
            if (hlo * hm <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                hlo = hm;
            }
        }
        c.points.push_back(std::polar(0.5 * (lo + hi), phi));
    }
    if (misses > 0)
        out.warnings.push_back(label + ": " + std::to_string(misses) +
                               " angles had no preimage; polyline truncated");
    if (c.points.size() >= 2)
        out.curves.push_back(std::move(c));
    else
        out.warnings.push_back(label + ": preimage empty; skipped");
}

} // namespace

MeshImages mesh_images(const HarmonicCornerMap& map, const PolarMeshSpec& spec) {
    if (!(spec.scale > 0.0) || spec.points_per_curve < 2)
        throw validation_error("mesh_images: need scale > 0 and points_per_curve >= 2");
    const double beta = map.config.beta;
    const double hb = half_angle(map.config);
    const double R = map.config.radius;
    const int P = spec.points_per_curve;

    MeshImages out;
    if (spec.plane == PolarMeshSpec::Plane::domain_z) {
        if (spec.scale > R * (1.0 + 1e-12))
            throw validation_error("mesh_images: domain grid scale exceeds the sector radius");
        for (const Polyline& src : polar_mesh(spec, beta)) {
            Polyline img;
            img.label = "t_image_" + src.label.substr(2); // t_arc_n -> t_image_arc_n
            img.points.reserve(src.points.size());
            for (const auto& zpt : src.points) img.points.push_back(evaluate(map, zpt));
            out.curves.push_back(std::move(img));
        }
        return out;
    }

    for (int n = 1; n <= 5; ++n)
        add_circle_preimage(map, spec.scale * n / 5.0, P,
                            "xi_preimage_circle_" + std::to_string(n), out);
    for (int n = 0; n <= 7; ++n) {
        const std::string label = "xi_preimage_ray_" + std::to_string(n);
        if (n == 0 || n == 7) {
            // The side rays theta in {0, pi} are exact boundary data for beta < 1
            // but have no curve through the vertex for beta > 1.
            if (beta > 1.0) {
                out.warnings.push_back(label + ": skipped for beta > 1 (no vertex expansion at theta in {0, pi})");
                continue;
            }
            const double sigma = n == 0 ? map.config.sigma_plus : map.config.sigma_minus;
            const double phi = n == 0 ? -hb : hb;
            const double rmax = std::min(R, spec.scale / sigma);
            Polyline c;
            c.label = label;
            for (int k = 0; k < P; ++k)
                c.points.push_back(std::polar(rmax * k / (P - 1), phi));
            out.curves.push_back(std::move(c));
            continue;
        }
        add_ray_preimage(map, kPi * n / 7.0, spec.scale, label, out);
    }
    return out;
}

} // namespace cornermap
