#include "doctest.h"

#include <cornermap/curve_tracer.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

using namespace cornermap;

namespace {
const double pi = std::acos(-1.0);

HarmonicCornerMap map_of(double beta, double sp, double sm, std::vector<double> a,
                         std::vector<double> b) {
    SeriesCoefficients c;
    c.a = std::move(a);
    c.b = std::move(b);
    return make_map(CornerConfig{beta, sp, sm, 1.0}, c);
}

// Generic beta = 1.5 fixture reused across traces.
HarmonicCornerMap generic15() { return map_of(1.5, 1.6, 0.7, {0.9, -0.27}, {1.1, 0.33}); }
} // namespace

TEST_CASE("log-spaced radii: count, order, endpoints") {
    const auto rs = log_spaced_radii(1e-5, 1e-2);
    CHECK(rs.size() == 145); // 3 decades * 48 + 1
    CHECK(rs.front() == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(rs.back() == doctest::Approx(1e-5).epsilon(1e-14));
    CHECK(std::is_sorted(rs.rbegin(), rs.rend()));
    for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i] < rs[i - 1]);

    const auto rs2 = log_spaced_radii(1e-4, 1e-1, 10);
    CHECK(rs2.size() == 31);
    // Uniform in log10.
    const double step = std::log10(rs2[0] / rs2[1]);
    for (std::size_t i = 1; i < rs2.size(); ++i)
        CHECK(std::log10(rs2[i - 1] / rs2[i]) == doctest::Approx(step).epsilon(1e-10));

    CHECK_THROWS_AS(log_spaced_radii(0.0, 1e-2), validation_error);
    CHECK_THROWS_AS(log_spaced_radii(1e-2, 1e-5), validation_error);
    CHECK_THROWS_AS(log_spaced_radii(1e-5, 1e-2, 0), validation_error);
}

TEST_CASE("tracer preconditions") {
    const auto m = generic15();
    const auto rs = log_spaced_radii(1e-4, 1e-2, 12);

    CHECK_THROWS_AS(trace_inverse_ray(m, 0.0, rs), validation_error);
    CHECK_THROWS_AS(trace_inverse_ray(m, pi, rs), validation_error);
    CHECK_THROWS_AS(trace_inverse_ray(m, -0.1, rs), validation_error);
    CHECK_THROWS_AS(trace_inverse_ray(m, 3.5, rs), validation_error);

    CHECK_THROWS_AS(trace_inverse_ray(m, 1.0, {}), validation_error);
    CHECK_THROWS_AS(trace_inverse_ray(m, 1.0, {1e-4, 1e-3}), validation_error); // ascending
    CHECK_THROWS_AS(trace_inverse_ray(m, 1.0, {1.5, 0.5}), validation_error);   // beyond R

    CHECK_THROWS_AS(trace_forward_ray(m, 2.5, rs), validation_error); // outside sector
}

TEST_CASE("level curve at theta* is the exact ray phi = phi*") {
    // With only the n = 1 term live, Im[(a1 + i b1) e^{-i theta*}] = 0, so the
    // series drops out of the level function and the root is Q = 0 exactly.
    const auto m = map_of(1.5, 1.7, 0.6, {2.0, 0.0}, {1.0, 0.0});
    const auto kit = make_kit(m);
    const auto rs = log_spaced_radii(1e-6, 1e-1, 16);
    const auto tc = trace_inverse_ray(m, kit.theta_star, rs);

    REQUIRE(tc.parameter.size() == rs.size());
    CHECK(tc.kind == TracedCurve::Kind::inverse_level_curve);
    CHECK(tc.theta_or_phi == kit.theta_star);
    for (std::size_t i = 0; i < tc.ordinate.size(); ++i) {
        CHECK(std::abs(tc.ordinate[i] - m.derived.phi_star) < 1e-11);
        CHECK(std::abs(tc.z[i]) == doctest::Approx(rs[i]).epsilon(1e-14));
        // w lies on the ray arg w = theta*.
        const double arg = std::atan2(tc.w[i].imag(), tc.w[i].real());
        CHECK(std::abs(arg - kit.theta_star) < 1e-9);
    }

    const auto est = estimate_exit_angle(tc, kit);
    CHECK(est.limit_angle == doctest::Approx(m.derived.phi_star).epsilon(1e-14));
    CHECK(!est.order_estimate.has_value());
    CHECK(est.fit_residual == 0.0);
}

TEST_CASE("midline trace with tiny a1 hugs phi = 0") {
    const auto m = map_of(0.5, 1.0, 1.0, {1e-3, 0.0}, {1.0, 0.0});
    const auto rs = log_spaced_radii(1e-5, 1e-1, 12);
    const auto tc = trace_inverse_ray(m, pi / 2, rs);
    for (std::size_t i = 0; i < tc.ordinate.size(); ++i) CHECK(std::abs(tc.ordinate[i]) < 1e-4);
    // The deviation from 0 shrinks with r.
    CHECK(std::abs(tc.ordinate.back()) < std::abs(tc.ordinate.front()));
}

TEST_CASE("exit-angle estimator on synthetic power-law data") {
    // phi* = 0.3 exactly: tan(pi beta / 2) = 1, so phi* = atan((sp-sm)/(sp+sm)).
    const double t = std::tan(0.3);
    const auto m = map_of(0.5, 1.0 + t, 1.0 - t, {1.0, 0.1}, {1.0, 0.1});
    const auto kit = make_kit(m);
    REQUIRE(m.derived.phi_star == doctest::Approx(0.3).epsilon(1e-14));

    TracedCurve c;
    c.kind = TracedCurve::Kind::inverse_level_curve;
    c.theta_or_phi = 1.0;
    c.parameter = log_spaced_radii(1e-6, 1e-2, 16);
    for (double r : c.parameter) c.ordinate.push_back(0.3 + 2.0 * std::pow(r, 0.5));

    const auto est = estimate_exit_angle(c, kit);
    CHECK(est.limit_angle == doctest::Approx(0.3).epsilon(1e-14));
    REQUIRE(est.order_estimate.has_value());
    CHECK(*est.order_estimate == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(est.fit_residual < 1e-8);

    SUBCASE("exactly constant ordinates short-circuit") {
        TracedCurve flat = c;
        for (auto& o : flat.ordinate) o = 0.3;
        const auto e2 = estimate_exit_angle(flat, kit);
        CHECK(e2.limit_angle == 0.3);
        CHECK(!e2.order_estimate.has_value());
        CHECK(e2.fit_residual == 0.0);
    }
    SUBCASE("too few samples") {
        TracedCurve small = c;
        small.parameter.resize(11);
        small.ordinate.resize(11);
        CHECK_THROWS_AS(estimate_exit_angle(small, kit), validation_error);
    }
    SUBCASE("too narrow a span") {
        TracedCurve narrow;
        narrow.parameter = log_spaced_radii(1e-3, 1e-2, 16);
        for (double r : narrow.parameter) narrow.ordinate.push_back(0.3 + 2.0 * std::pow(r, 0.5));
        CHECK_THROWS_AS(estimate_exit_angle(narrow, kit), validation_error);
    }
    SUBCASE("non-power-law data is rejected") {
        TracedCurve junk = c;
        for (std::size_t i = 0; i < junk.ordinate.size(); ++i)
            junk.ordinate[i] = 0.4 + 0.35 * std::sin(17.0 * static_cast<double>(i));
        CHECK_THROWS_AS(estimate_exit_angle(junk, kit), validation_error);
    }
}

TEST_CASE("inverse trace below theta* exits along the lower side (beta > 1)") {
    const auto m = generic15();
    const auto kit = make_kit(m);
    const double theta = kit.theta_star / 2;
    const auto rs = log_spaced_radii(1e-6, 1e-2, 24);
    const auto tc = trace_inverse_ray(m, theta, rs);

    // Branch continuity: no jumps between consecutive roots.
    for (std::size_t i = 1; i < tc.ordinate.size(); ++i)
        CHECK(std::abs(tc.ordinate[i] - tc.ordinate[i - 1]) < 0.1);

    const auto est = estimate_exit_angle(tc, kit);
    CHECK(est.limit_angle == doctest::Approx(-3 * pi / 4).epsilon(1e-14));
    REQUIRE(est.order_estimate.has_value());
    CHECK(*est.order_estimate == doctest::Approx(1.0 / 3.0).epsilon(0.15)); // 2/beta - 1

    const auto rep = compare_with_asymptotics(tc, kit);
    CHECK(rep.max_abs < 0.05);
    CHECK(rep.rms <= rep.max_abs);
    CHECK(rep.expected_remainder_exponent == doctest::Approx(kit.gamma).epsilon(1e-14));
    CHECK(std::isfinite(rep.remainder_exponent));
    CHECK(rep.remainder_exponent > kit.gamma - 0.15);
}

TEST_CASE("forward rays: boundary identity and interior limits") {
    const auto m = map_of(0.5, 2.0, 1.0, {0.9, -0.27}, {1.1, 0.33});
    const auto kit = make_kit(m);
    const auto rs = log_spaced_radii(1e-6, 1e-3, 16);

    // Lower side maps to the positive real axis with parameter sigma_plus * r.
    const auto side = trace_forward_ray(m, -pi / 4, rs);
    for (std::size_t i = 0; i < side.parameter.size(); ++i) {
        CHECK(std::abs(side.ordinate[i]) < 1e-12);
        CHECK(side.parameter[i] == doctest::Approx(2.0 * rs[i]).epsilon(1e-12));
    }
    const auto srep = compare_with_asymptotics(side, kit);
    CHECK(srep.max_abs < 1e-12);
    CHECK(std::isnan(srep.expected_remainder_exponent));

    // Interior ray above phi* exits at theta = pi for beta < 1.
    const auto up = trace_forward_ray(m, m.derived.phi_star + 0.1, rs);
    const auto est = estimate_exit_angle(up, kit);
    CHECK(est.limit_angle == doctest::Approx(pi).epsilon(1e-14));

    // For beta > 1 every interior ray exits at theta*.
    const auto m15 = generic15();
    const auto kit15 = make_kit(m15);
    const auto rs15 = log_spaced_radii(1e-7, 1e-3, 16);
    const auto fwd = trace_forward_ray(m15, m15.derived.phi_star + 0.2, rs15);
    const auto e15 = estimate_exit_angle(fwd, kit15);
    CHECK(e15.limit_angle == doctest::Approx(kit15.theta_star).epsilon(1e-14));
    REQUIRE(e15.order_estimate.has_value());
    CHECK(*e15.order_estimate == doctest::Approx(1.0 - 1.0 / 1.5).epsilon(0.15));
}

TEST_CASE("polar grid curves: counts, labels, geometry") {
    PolarMeshSpec spec;
    spec.scale = 2.0;
    spec.points_per_curve = 41;

    const auto xi = polar_mesh(spec, 0.5);
    REQUIRE(xi.size() == 13);
    CHECK(xi[0].label == "xi_circle_1");
    CHECK(xi[4].label == "xi_circle_5");
    CHECK(xi[5].label == "xi_ray_0");
    CHECK(xi[12].label == "xi_ray_7");
    for (const auto& c : xi) CHECK(c.points.size() == 41);
    // Circle n has radius 2 n / 5 and spans the upper half plane.
    CHECK(std::abs(xi[2].points[0] - std::complex<double>(1.2, 0.0)) < 1e-12);
    CHECK(std::abs(xi[2].points[40] - std::complex<double>(-1.2, 0.0)) < 1e-12);
    // Ray 0 runs along theta = 0.
    CHECK(std::abs(xi[5].points[40] - std::complex<double>(2.0, 0.0)) < 1e-12);

    spec.plane = PolarMeshSpec::Plane::domain_z;
    spec.scale = 1.0;
    const auto tg = polar_mesh(spec, 1.5);
    REQUIRE(tg.size() == 13);
    CHECK(tg[0].label == "t_arc_1");
    CHECK(tg[5].label == "t_ray_0");
    const double hb = 0.75 * pi;
    // First ray runs along phi = -hb, last along +hb.
    CHECK(std::abs(std::arg(tg[5].points[40]) + hb) < 1e-12);
    CHECK(std::abs(std::arg(tg[12].points[40]) - hb) < 1e-12);

    CHECK_THROWS_AS(polar_mesh(PolarMeshSpec{PolarMeshSpec::Plane::image_w, 0.0, 10}, 0.5),
                    validation_error);
}

TEST_CASE("default image-grid scale is positive and attained on the mid arc") {
    const auto m = map_of(0.5, 1.0, 1.0, {1.0, 0.2}, {1.0, 0.1});
    const double s = default_xi_scale(m);
    CHECK(s > 0.0);
    CHECK(std::isfinite(s));
    // It cannot exceed the image of the arc's nearest point at r = R/2.
    CHECK(s <= std::abs(evaluate(m, std::polar(0.5, 0.0))) * (1 + 1e-12));
}

TEST_CASE("mesh images on both planes") {
    const auto m05 = map_of(0.5, 1.0, 1.0, {1.0, 0.2}, {1.0, 0.1});

    PolarMeshSpec spec;
    spec.scale = default_xi_scale(m05);
    spec.points_per_curve = 61;

    SUBCASE("image-plane preimages for beta < 1 include the side rays") {
        const auto mi = mesh_images(m05, spec);
        CHECK(mi.warnings.empty());
        REQUIRE(mi.curves.size() == 13);
        CHECK(mi.curves[0].label == "xi_preimage_circle_1");
        CHECK(mi.curves[5].label == "xi_preimage_ray_0");
        // The ray-0 preimage is the lower side phi = -pi beta / 2.
        for (const auto& zpt : mi.curves[5].points)
            if (std::abs(zpt) > 1e-12) CHECK(std::arg(zpt) == doctest::Approx(-pi / 4).epsilon(1e-12));
        // Preimage points map back onto the requested circle.
        const auto& c3 = mi.curves[2];
        const double rho3 = spec.scale * 3.0 / 5.0;
        for (const auto& zpt : c3.points)
            CHECK(std::abs(evaluate(m05, zpt)) == doctest::Approx(rho3).epsilon(1e-9));
    }

    SUBCASE("image-plane preimages for beta > 1 skip the side rays") {
        const auto m15 = generic15();
        PolarMeshSpec s15;
        s15.scale = default_xi_scale(m15);
        s15.points_per_curve = 61;
        const auto mi = mesh_images(m15, s15);
        CHECK(mi.curves.size() == 11);
        REQUIRE(mi.warnings.size() == 2);
        CHECK(mi.warnings[0].find("xi_preimage_ray_0") != std::string::npos);
        CHECK(mi.warnings[1].find("xi_preimage_ray_7") != std::string::npos);
    }

    SUBCASE("domain-plane images evaluate the map on the T grid") {
        PolarMeshSpec dspec;
        dspec.plane = PolarMeshSpec::Plane::domain_z;
        dspec.scale = 0.8;
        dspec.points_per_curve = 33;
        const auto mi = mesh_images(m05, dspec);
        CHECK(mi.warnings.empty());
        REQUIRE(mi.curves.size() == 13);
        CHECK(mi.curves[0].label == "t_image_arc_1");
        CHECK(mi.curves[5].label == "t_image_ray_0");
        // Side rays map into the real axis.
        for (const auto& w : mi.curves[5].points) CHECK(std::abs(w.imag()) < 1e-12);
        for (const auto& w : mi.curves[12].points) CHECK(std::abs(w.imag()) < 1e-12);
        // Spot check one interior node against evaluate().
        const auto grid = polar_mesh(dspec, 0.5);
        CHECK(std::abs(mi.curves[3].points[7] - evaluate(m05, grid[3].points[7])) < 1e-15);

        PolarMeshSpec big = dspec;
        big.scale = 1.5;
        CHECK_THROWS_AS(mesh_images(m05, big), validation_error);
    }
}
