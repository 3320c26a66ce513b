#include "doctest.h"

#include <cornermap/curve_tracer.hpp>
#include <cornermap/winslow.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

using namespace cornermap;

namespace {
const double pi = std::acos(-1.0);
using cd = std::complex<double>;

// Rectangle [x0,x1] x [y0,y1] traced counterclockwise with n segments per side.
DomainBoundary rect_domain(double x0, double x1, double y0, double y1, std::size_t n) {
    DomainBoundary d;
    auto lerp = [](cd a, cd b, double t) { return a + (b - a) * t; };
    const cd c0{x0, y0}, c1{x1, y0}, c2{x1, y1}, c3{x0, y1};
    for (std::size_t k = 0; k < n; ++k) d.vertices.push_back(lerp(c0, c1, double(k) / n));
    for (std::size_t k = 0; k < n; ++k) d.vertices.push_back(lerp(c1, c2, double(k) / n));
    for (std::size_t k = 0; k < n; ++k) d.vertices.push_back(lerp(c2, c3, double(k) / n));
    for (std::size_t k = 0; k < n; ++k) d.vertices.push_back(lerp(c3, c0, double(k) / n));
    d.vertices.push_back(c0);
    d.side_map = {SideRange{0, n}, SideRange{n, 2 * n}, SideRange{2 * n, 3 * n},
                  SideRange{3 * n, 4 * n}};
    return d;
}

DomainBoundary unit_square(std::size_t n = 8) { return rect_domain(-0.5, 0.5, 0.0, 1.0, n); }

// Signed areas of the four corner triangles of cell (i, j).
std::array<double, 4> cell_areas(const WinslowGrid& g, int i, int j) {
    auto P = [&](int a, int b) { return cd{g.x[g.idx(a, b)], g.y[g.idx(a, b)]}; };
    const cd q[4] = {P(i, j), P(i + 1, j), P(i + 1, j + 1), P(i, j + 1)};
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k) {
        const cd e1 = q[(k + 1) % 4] - q[k];
        const cd e2 = q[(k + 2) % 4] - q[(k + 1) % 4];
        out[k] = e1.real() * e2.imag() - e1.imag() * e2.real();
    }
    return out;
}
} // namespace

TEST_CASE("domain validation accepts the builders and rejects malformed input") {
    CHECK_NOTHROW(validate_domain(unit_square()));
    CHECK_NOTHROW(validate_domain(rect_domain(-1, 1, 0, 2, 5)));

    SUBCASE("clockwise orientation") {
        auto d = unit_square();
        std::reverse(d.vertices.begin(), d.vertices.end());
        CHECK_THROWS_AS(validate_domain(d), validation_error);
    }
    SUBCASE("not closed") {
        auto d = unit_square();
        d.vertices.back() = cd{0.1, 0.1};
        CHECK_THROWS_AS(validate_domain(d), validation_error);
    }
    SUBCASE("side ranges leave a gap") {
        auto d = unit_square();
        d.side_map[1].begin += 1;
        CHECK_THROWS_AS(validate_domain(d), validation_error);
    }
    SUBCASE("side range collapsed") {
        auto d = unit_square();
        d.side_map[2] = SideRange{16, 16};
        CHECK_THROWS_AS(validate_domain(d), validation_error);
    }
    SUBCASE("corner marker out of range") {
        auto d = unit_square();
        d.corner_markers.push_back(d.vertices.size() + 5);
        CHECK_THROWS_AS(validate_domain(d), validation_error);
    }
}

TEST_CASE("sector domain layout") {
    const CornerConfig cfg{0.5, 1.0, 1.0, 1.0};
    const auto d = make_sector_domain(cfg);
    CHECK_NOTHROW(validate_domain(d));
    REQUIRE(d.vertices.size() == 515); // A, 0, B, 512-segment arc, back to A
    CHECK(d.side_map[0].begin == 0);
    CHECK(d.side_map[0].end == 2);
    CHECK(d.side_map[3].end == 514);
    CHECK(d.side_map[1].begin == 2);
    CHECK(d.side_map[1].end == d.side_map[2].begin);
    CHECK(d.side_map[2].end == d.side_map[3].begin);
    REQUIRE(d.corner_markers.size() == 1);
    CHECK(d.corner_markers[0] == 1); // the sector vertex z = 0
    CHECK(std::abs(d.vertices[1]) == 0.0);
    CHECK(std::abs(d.vertices[0] - std::polar(1.0, pi / 4)) < 1e-15);
    CHECK(std::abs(d.vertices[2] - std::polar(1.0, -pi / 4)) < 1e-15);
    // All arc vertices on |z| = R.
    for (std::size_t k = 2; k < d.vertices.size(); ++k)
        CHECK(std::abs(d.vertices[k]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d.vertices.front() - d.vertices.back()) == 0.0);

    CHECK_THROWS_AS(make_sector_domain(cfg, 4), validation_error);
    CHECK_THROWS_AS(make_sector_domain(cfg, 512, 0.7, 0.25), validation_error);
}

TEST_CASE("boundary parameterization: constant speed and shared corners") {
    const auto d = unit_square(16);
    const auto nodes = parameterize_boundary(d, 9, 7);
    REQUIRE(nodes.bottom.size() == 9);
    REQUIRE(nodes.top.size() == 9);
    REQUIRE(nodes.right.size() == 7);
    REQUIRE(nodes.left.size() == 7);

    auto check_speed = [](const std::vector<cd>& side) {
        double mn = 1e300, mx = 0.0;
        for (std::size_t k = 1; k < side.size(); ++k) {
            const double s = std::abs(side[k] - side[k - 1]);
            mn = std::min(mn, s);
            mx = std::max(mx, s);
        }
        CHECK(mx - mn < 1e-9 * mx);
    };
    check_speed(nodes.bottom);
    check_speed(nodes.right);
    check_speed(nodes.top);
    check_speed(nodes.left);

    // Orientation convention: top and left run with increasing u and v.
    CHECK(std::abs(nodes.bottom.front() - cd{-0.5, 0.0}) < 1e-14);
    CHECK(std::abs(nodes.bottom.back() - cd{0.5, 0.0}) < 1e-14);
    CHECK(std::abs(nodes.top.front() - cd{-0.5, 1.0}) < 1e-14);
    CHECK(std::abs(nodes.top.back() - cd{0.5, 1.0}) < 1e-14);
    CHECK(std::abs(nodes.left.front() - nodes.bottom.front()) < 1e-14);
    CHECK(std::abs(nodes.left.back() - nodes.top.front()) < 1e-14);
    CHECK(std::abs(nodes.right.front() - nodes.bottom.back()) < 1e-14);
    CHECK(std::abs(nodes.right.back() - nodes.top.back()) < 1e-14);

    CHECK_THROWS_AS(parameterize_boundary(d, 2, 7), validation_error);
}

TEST_CASE("square boundary values along the sector arc") {
    const CornerConfig cfg{0.5, 1.0, 1.0, 1.0};
    const auto d = make_sector_domain(cfg);
    const auto samples = boundary_square_values_on_arc(d, 257);
    REQUIRE(samples.size() == 257);
    // phi ascends across the arc from -hb to +hb.
    CHECK(samples.front().phi == doctest::Approx(-pi / 4).epsilon(1e-12));
    CHECK(samples.back().phi == doctest::Approx(pi / 4).epsilon(1e-12));
    for (std::size_t k = 1; k < samples.size(); ++k) CHECK(samples[k].phi > samples[k - 1].phi);
    // The square values walk right side, top, left: from (1/2, 0) to (-1/2, 0).
    CHECK(std::abs(samples.front().value - cd{0.5, 0.0}) < 1e-12);
    CHECK(std::abs(samples.back().value - cd{-0.5, 0.0}) < 1e-12);
    double vmax = 0.0;
    for (const auto& s : samples) {
        CHECK(s.value.real() >= -0.5 - 1e-12);
        CHECK(s.value.real() <= 0.5 + 1e-12);
        CHECK(s.value.imag() >= -1e-12);
        CHECK(s.value.imag() <= 1.0 + 1e-12);
        vmax = std::max(vmax, s.value.imag());
    }
    CHECK(vmax == doctest::Approx(1.0).epsilon(1e-12)); // the top edge is reached
}

TEST_CASE("identity square solves in zero sweeps") {
    const auto d = unit_square(32);
    const auto [grid, rep] = solve(d, 9, 9);
    CHECK(rep.initial_residual < 1e-12);
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(rep.update_history.empty());
    CHECK(rep.bbox_violations == 0);
    CHECK(rep.fold_cells.empty());
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            CHECK(grid.x[grid.idx(i, j)] == doctest::Approx(grid.u_of(i)).epsilon(1e-12));
            CHECK(grid.y[grid.idx(i, j)] == doctest::Approx(grid.v_of(j)).epsilon(1e-12));
        }
}

TEST_CASE("affine rectangle reproduces the exact linear solution") {
    const auto d = rect_domain(-1.0, 1.0, 0.0, 2.0, 16);
    const auto [grid, rep] = solve(d, 11, 13);
    CHECK(rep.converged);
    CHECK(rep.fold_cells.empty());
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 13; ++j) {
            CHECK(grid.x[grid.idx(i, j)] == doctest::Approx(2.0 * grid.u_of(i)).epsilon(1e-10));
            CHECK(grid.y[grid.idx(i, j)] == doctest::Approx(2.0 * grid.v_of(j)).epsilon(1e-10));
        }
}

TEST_CASE("sector solve: report consistency and boundary pinning") {
    const CornerConfig cfg{0.5, 1.0, 1.0, 1.0};
    const auto d = make_sector_domain(cfg);
    const int n = 17;
    const auto [grid, rep] = solve(d, n, n);
    CHECK(rep.converged);
    CHECK(rep.final_update < 1e-10);
    CHECK(rep.bbox_violations == 0);
    CHECK(rep.iterations == static_cast<int>(rep.update_history.size()));
    CHECK(rep.iterations > 0);
    CHECK(rep.initial_residual > 1e-10);
    // Updates settle monotonically near the end (within 10% slack).
    const auto& h = rep.update_history;
    for (std::size_t k = h.size() > 10 ? h.size() - 10 : 1; k < h.size(); ++k)
        CHECK(h[k] <= 1.1 * h[k - 1]);

    // Dirichlet rows equal the parameterized boundary exactly.
    const auto nodes = parameterize_boundary(d, n, n);
    for (int i = 0; i < n; ++i) {
        CHECK(grid.x[grid.idx(i, 0)] == nodes.bottom[size_t(i)].real());
        CHECK(grid.y[grid.idx(i, 0)] == nodes.bottom[size_t(i)].imag());
        CHECK(grid.x[grid.idx(i, n - 1)] == nodes.top[size_t(i)].real());
        CHECK(grid.y[grid.idx(i, n - 1)] == nodes.top[size_t(i)].imag());
    }
    for (int j = 0; j < n; ++j) {
        CHECK(grid.x[grid.idx(0, j)] == nodes.left[size_t(j)].real());
        CHECK(grid.x[grid.idx(n - 1, j)] == nodes.right[size_t(j)].real());
    }

    // All nodes stay inside the closed sector.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cd z{grid.x[grid.idx(i, j)], grid.y[grid.idx(i, j)]};
            CHECK(std::abs(z) <= 1.0 + 1e-9);
            if (std::abs(z) > 1e-9) CHECK(std::abs(std::arg(z)) <= pi / 4 + 1e-9);
        }

    SUBCASE("iteration cap reports non-convergence without throwing") {
        WinslowOptions opts;
        opts.max_iters = 3;
        const auto [g2, r2] = solve(d, n, n, opts);
        CHECK(!r2.converged);
        CHECK(r2.iterations == 3);
        CHECK(r2.update_history.size() == 3);
    }
    SUBCASE("option validation") {
        WinslowOptions bad;
        bad.relaxation = 2.0;
        CHECK_THROWS_AS(solve(d, n, n, bad), validation_error);
        bad.relaxation = 1.7;
        bad.tol = 0.0;
        CHECK_THROWS_AS(solve(d, n, n, bad), validation_error);
    }
}

TEST_CASE("fold detection agrees with the signed-area definition") {
    const auto d = unit_square(8);
    auto [grid, rep] = solve(d, 5, 5);
    CHECK(fold_cells(grid).empty());

    // Drag an interior node across the opposite cell edge: every incident cell
    // whose corner triangles lose positivity must be flagged.
    grid.x[grid.idx(2, 2)] = grid.x[grid.idx(4, 2)] + 0.1;
    const auto flagged = fold_cells(grid);
    CHECK(!flagged.empty());

    std::set<std::pair<int, int>> brute;
    for (int i = 0; i + 1 < grid.nx; ++i)
        for (int j = 0; j + 1 < grid.ny; ++j) {
            const auto a = cell_areas(grid, i, j);
            if (!(a[0] > 0 && a[1] > 0 && a[2] > 0 && a[3] > 0)) brute.insert({i, j});
        }
    CHECK(brute == std::set<std::pair<int, int>>(flagged.begin(), flagged.end()));

    // The solver report uses the same predicate.
    CHECK(rep.fold_cells.empty());
}

TEST_CASE("composed map residual: misalignment guard and full pipeline") {
    const CornerConfig cfg{0.5, 1.0, 1.0, 1.0};
    SeriesCoefficients seed;
    seed.a = {1.0, 0.2};
    seed.b = {1.0, 0.1};
    const auto planted = make_map(cfg, seed);

    SUBCASE("a grid that ignores the map's boundary data is rejected") {
        const auto [grid, rep] = solve(unit_square(16), 9, 9);
        CHECK_THROWS_AS(composition_residual(grid, planted), validation_error);
    }

    SUBCASE("mesh + fitted map compose to near-lattice values") {
        // The square correspondence runs at speed 1/(2R) along the straight
        // sides, so the fitted map's config carries sigma = 0.5, not the
        // sector's nominal speeds.
        const CornerConfig square_cfg{cfg.beta, 0.5, 0.5, cfg.radius};
        const auto domain = make_sector_domain(square_cfg);
        const auto samples = boundary_square_values_on_arc(domain, 4097);
        const auto coeffs = fit_from_arc(square_cfg, derive_params(square_cfg), samples, 16);
        const auto fitted = make_map(square_cfg, coeffs);

        const auto [grid, rep] = solve(domain, 17, 17);
        REQUIRE(rep.converged);
        const auto comp = composition_residual(grid, fitted);
        CHECK(comp.boundary_misalignment < 0.05);
        CHECK(comp.max_all >= comp.max_away);
        CHECK(comp.max_all >= comp.max_near_corner);
        CHECK(comp.max_all < 0.5);
        CHECK(comp.max_away < 0.25);
        CHECK(std::isfinite(comp.max_near_corner));
    }
}
