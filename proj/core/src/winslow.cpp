#include "cornermap/winslow.hpp"

#include "cornermap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace cornermap {

namespace {

using cd = std::complex<double>;

// Cumulative arclength over vertices[b..e]; cum[0] = 0.
std::vector<double> cumulative_length(const std::vector<cd>& v, std::size_t b, std::size_t e) {
    std::vector<double> cum(e - b + 1, 0.0);
    for (std::size_t k = b; k < e; ++k)
        cum[k - b + 1] = cum[k - b] + std::abs(v[k + 1] - v[k]);
    return cum;
}

// Point at arclength fraction s of the sub-polyline starting at index b.
cd point_at_fraction(const std::vector<cd>& v, std::size_t b, const std::vector<double>& cum,
                     double s) {
    const double d = s * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), d);
    std::size_t k = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
    k = std::min(k, cum.size() - 2);
    const double seg = cum[k + 1] - cum[k];
    const double t = seg > 0.0 ? (d - cum[k]) / seg : 0.0;
    return v[b + k] + t * (v[b + k + 1] - v[b + k]);
}

} // namespace

void validate_domain(const DomainBoundary& domain) {
    const auto& v = domain.vertices;
    if (v.size() < 5)
        throw validation_error("domain: need at least 4 distinct vertices plus the closing point");
    double diam = 0.0;
    for (const auto& p : v) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
            throw validation_error("domain: non-finite vertex");
        diam = std::max(diam, std::abs(p - v.front()));
    }
    if (!(diam > 0.0))
        throw validation_error("domain: degenerate polyline");
    if (std::abs(v.front() - v.back()) > 1e-9 * diam)
        throw validation_error("domain: polyline is not closed (first vertex must repeat at the end)");

    const auto& sm = domain.side_map;
    if (sm[0].begin != 0 || sm[3].end != v.size() - 1)
        throw validation_error("domain: side ranges must cover the closed polyline");
    for (int k = 0; k < 4; ++k)
        if (sm[k].end <= sm[k].begin)
            throw validation_error("domain: empty side range");
    for (int k = 0; k < 3; ++k)
        if (sm[k].end != sm[k + 1].begin)
            throw validation_error("domain: side ranges must be contiguous");

    double area2 = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        area2 += v[k].real() * v[k + 1].imag() - v[k + 1].real() * v[k].imag();
    if (!(area2 > 0.0))
        throw validation_error("domain: polyline must be counterclockwise");

    for (std::size_t m : domain.corner_markers)
        if (m >= v.size())
            throw validation_error("domain: corner marker out of range");
}

DomainBoundary make_sector_domain(const CornerConfig& config, int arc_segments, double split0,
                                  double split1) {
    validate_config(config);
    if (arc_segments < 8)
        throw validation_error("make_sector_domain: arc_segments must be >= 8");
    if (!(split0 > 0.0) || !(split0 < split1) || !(split1 < 1.0))
        throw validation_error("make_sector_domain: splits must satisfy 0 < split0 < split1 < 1");

    const double hb = half_angle(config);
    const double R = config.radius;

    DomainBoundary d;
    auto& v = d.vertices;
    v.reserve(static_cast<std::size_t>(arc_segments) + 4);
    v.push_back(std::polar(R, hb)); // A
    v.emplace_back(0.0, 0.0);       // corner vertex
    v.push_back(std::polar(R, -hb)); // B
    for (int k = 1; k < arc_segments; ++k)
        v.push_back(std::polar(R, -hb + 2.0 * hb * k / arc_segments));
    v.push_back(std::polar(R, hb)); // closing A

    const std::size_t last = v.size() - 1;
    const std::size_t k0 = 2 + static_cast<std::size_t>(std::lround(split0 * arc_segments));
    const std::size_t k1 = 2 + static_cast<std::size_t>(std::lround(split1 * arc_segments));
    if (!(k0 > 2 && k1 > k0 && k1 < last))
        throw validation_error("make_sector_domain: splits collapse a side at this resolution");

    d.side_map = {SideRange{0, 2}, SideRange{2, k0}, SideRange{k0, k1}, SideRange{k1, last}};
    d.corner_markers = {1};
    validate_domain(d);
    return d;
}

std::vector<ArcSample> boundary_square_values_on_arc(const DomainBoundary& domain, int n_samples) {
    validate_domain(domain);
    if (n_samples < 2)
        throw validation_error("boundary_square_values_on_arc: need at least 2 samples");

    const auto& sm = domain.side_map;
    const std::size_t b = sm[1].begin;
    const auto cum = cumulative_length(domain.vertices, b, sm[3].end);
    const double L = cum.back();
    const double L1 = cum[sm[1].end - b];
    const double L2 = cum[sm[2].end - b];
    if (!(L > 0.0) || !(L1 > 0.0) || !(L2 > L1) || !(L > L2))
        throw validation_error("boundary_square_values_on_arc: degenerate arc side");

    std::vector<ArcSample> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int k = 0; k < n_samples; ++k) {
        const double f = static_cast<double>(k) / (n_samples - 1);
        const double dlen = f * L;
        const cd z = point_at_fraction(domain.vertices, b, cum, f);
        cd square;
        if (dlen <= L1)
            square = cd(0.5, dlen / L1);
        else if (dlen <= L2)
            square = cd(0.5 - (dlen - L1) / (L2 - L1), 1.0);
        else
            square = cd(-0.5, 1.0 - (dlen - L2) / (L - L2));
        out.push_back({std::atan2(z.imag(), z.real()), square});
    }
    return out;
}

BoundaryNodes parameterize_boundary(const DomainBoundary& domain, int nx, int ny) {
    validate_domain(domain);
    if (nx < 3 || ny < 3)
        throw validation_error("parameterize_boundary: nx and ny must be >= 3");

    auto sample_side = [&](const SideRange& s, int n, bool reversed) {
        const auto cum = cumulative_length(domain.vertices, s.begin, s.end);
        if (!(cum.back() > 0.0))
            throw validation_error("parameterize_boundary: degenerate side");
        std::vector<cd> pts(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            pts[static_cast<std::size_t>(k)] =
                point_at_fraction(domain.vertices, s.begin, cum, static_cast<double>(k) / (n - 1));
        if (reversed) std::reverse(pts.begin(), pts.end());
        return pts;
    };

    BoundaryNodes nodes;
    nodes.bottom = sample_side(domain.side_map[0], nx, false);
    nodes.right = sample_side(domain.side_map[1], ny, false);
    nodes.top = sample_side(domain.side_map[2], nx, true);
    nodes.left = sample_side(domain.side_map[3], ny, true);
    return nodes;
}

WinslowGrid transfinite_grid(const BoundaryNodes& nodes, int nx, int ny) {
    if (nx < 3 || ny < 3 || nodes.bottom.size() != static_cast<std::size_t>(nx) ||
        nodes.top.size() != static_cast<std::size_t>(nx) ||
        nodes.right.size() != static_cast<std::size_t>(ny) ||
        nodes.left.size() != static_cast<std::size_t>(ny))
        throw validation_error("transfinite_grid: boundary node counts do not match nx, ny");

    WinslowGrid g;
    g.nx = nx;
    g.ny = ny;
    g.x.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    g.y.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    for (int i = 0; i < nx; ++i) {
        const double u = static_cast<double>(i) / (nx - 1);
        for (int j = 0; j < ny; ++j) {
            const double v = static_cast<double>(j) / (ny - 1);
            const cd val = (1.0 - v) * nodes.bottom[i] + v * nodes.top[i] +
                           (1.0 - u) * nodes.left[j] + u * nodes.right[j] -
                           ((1.0 - u) * (1.0 - v) * nodes.bottom.front() +
                            u * (1.0 - v) * nodes.bottom.back() +
                            (1.0 - u) * v * nodes.top.front() + u * v * nodes.top.back());
            g.x[g.idx(i, j)] = val.real();
            g.y[g.idx(i, j)] = val.imag();
        }
    }
    // The blend reproduces the boundary only up to rounding; pin it exactly.
    for (int i = 0; i < nx; ++i) {
        g.x[g.idx(i, 0)] = nodes.bottom[static_cast<std::size_t>(i)].real();
        g.y[g.idx(i, 0)] = nodes.bottom[static_cast<std::size_t>(i)].imag();
        g.x[g.idx(i, ny - 1)] = nodes.top[static_cast<std::size_t>(i)].real();
        g.y[g.idx(i, ny - 1)] = nodes.top[static_cast<std::size_t>(i)].imag();
    }
    for (int j = 0; j < ny; ++j) {
        g.x[g.idx(0, j)] = nodes.left[static_cast<std::size_t>(j)].real();
        g.y[g.idx(0, j)] = nodes.left[static_cast<std::size_t>(j)].imag();
        g.x[g.idx(nx - 1, j)] = nodes.right[static_cast<std::size_t>(j)].real();
        g.y[g.idx(nx - 1, j)] = nodes.right[static_cast<std::size_t>(j)].imag();
    }
    return g;
}

std::pair<WinslowGrid, SolveReport> solve(const DomainBoundary& domain, int nx, int ny,
                                          const WinslowOptions& options) {
    if (!(options.relaxation > 0.0) || !(options.relaxation < 2.0))
        throw validation_error("solve: relaxation must lie in (0, 2)");
    if (!(options.tol > 0.0))
        throw validation_error("solve: tolerance must be positive");

    WinslowGrid g = transfinite_grid(parameterize_boundary(domain, nx, ny), nx, ny);
    const double hu = 1.0 / (nx - 1);
    const double hv = 1.0 / (ny - 1);
    const double om = options.relaxation;
    const int itmax = options.max_iters > 0 ? options.max_iters : 200 * std::max(nx, ny);

    auto X = [&g](int i, int j) -> double& { return g.x[g.idx(i, j)]; };
    auto Y = [&g](int i, int j) -> double& { return g.y[g.idx(i, j)]; };

    // Gauss-Seidel target (gx, gy) of the frozen-coefficient 9-point stencil.
    auto stencil = [&](int i, int j, double& gx, double& gy) {
        const double xu = (X(i + 1, j) - X(i - 1, j)) / (2.0 * hu);
        const double yu = (Y(i + 1, j) - Y(i - 1, j)) / (2.0 * hu);
        const double xv = (X(i, j + 1) - X(i, j - 1)) / (2.0 * hv);
        const double yv = (Y(i, j + 1) - Y(i, j - 1)) / (2.0 * hv);
        const double al = xv * xv + yv * yv;
        const double be = xu * xv + yu * yv;
        const double ga = xu * xu + yu * yu;
        const double cx =
            (X(i + 1, j + 1) - X(i + 1, j - 1) - X(i - 1, j + 1) + X(i - 1, j - 1)) /
            (4.0 * hu * hv);
        const double cy =
            (Y(i + 1, j + 1) - Y(i + 1, j - 1) - Y(i - 1, j + 1) + Y(i - 1, j - 1)) /
            (4.0 * hu * hv);
        const double den = 2.0 * al / (hu * hu) + 2.0 * ga / (hv * hv);
        if (den < 1e-300) return false;
        gx = (al * (X(i + 1, j) + X(i - 1, j)) / (hu * hu) +
              ga * (X(i, j + 1) + X(i, j - 1)) / (hv * hv) - 2.0 * be * cx) / den;
        gy = (al * (Y(i + 1, j) + Y(i - 1, j)) / (hu * hu) +
              ga * (Y(i, j + 1) + Y(i, j - 1)) / (hv * hv) - 2.0 * be * cy) / den;
        return true;
    };

    // Bounding box of the boundary nodes; interior nodes must stay within it.
    double bx0 = std::numeric_limits<double>::infinity(), bx1 = -bx0;
    double by0 = bx0, by1 = -bx0;
    auto box = [&](int i, int j) {
        bx0 = std::min(bx0, X(i, j));
        bx1 = std::max(bx1, X(i, j));
        by0 = std::min(by0, Y(i, j));
        by1 = std::max(by1, Y(i, j));
    };
    for (int i = 0; i < nx; ++i) { box(i, 0); box(i, ny - 1); }
    for (int j = 0; j < ny; ++j) { box(0, j); box(nx - 1, j); }

    SolveReport rep;
    for (int i = 1; i < nx - 1; ++i)
        for (int j = 1; j < ny - 1; ++j) {
            double gx, gy;
            if (!stencil(i, j, gx, gy)) continue;
            rep.initial_residual =
                std::max({rep.initial_residual, std::abs(gx - X(i, j)), std::abs(gy - Y(i, j))});
        }

    if (rep.initial_residual < options.tol) {
        rep.converged = true;
        rep.final_update = rep.initial_residual;
    } else {
        for (int it = 0; it < itmax; ++it) {
            double upd = 0.0;
            for (int i = 1; i < nx - 1; ++i)
                for (int j = 1; j < ny - 1; ++j) {
                    double gx, gy;
                    if (!stencil(i, j, gx, gy)) continue;
                    const double nxv = X(i, j) + om * (gx - X(i, j));
                    const double nyv = Y(i, j) + om * (gy - Y(i, j));
                    const double dx = std::abs(nxv - X(i, j));
                    const double dy = std::abs(nyv - Y(i, j));
                    if (!(dx <= upd)) upd = dx; // NaN-propagating max
                    if (!(dy <= upd)) upd = dy;
                    X(i, j) = nxv;
                    Y(i, j) = nyv;
                }
            if (!std::isfinite(upd))
                throw solver_error("winslow solve diverged (non-finite update) at sweep " +
                                   std::to_string(it + 1));
            bool violated = false;
            for (int i = 1; i < nx - 1 && !violated; ++i)
                for (int j = 1; j < ny - 1 && !violated; ++j)
                    if (X(i, j) < bx0 - 1e-12 || X(i, j) > bx1 + 1e-12 ||
                        Y(i, j) < by0 - 1e-12 || Y(i, j) > by1 + 1e-12)
                        violated = true;
            if (violated) ++rep.bbox_violations;
            rep.update_history.push_back(upd);
            rep.iterations = it + 1;
            rep.final_update = upd;
            if (upd < options.tol) {
                rep.converged = true;
                break;
            }
        }
    }

    rep.fold_cells = fold_cells(g);
    return {std::move(g), rep};
}

std::vector<std::pair<int, int>> fold_cells(const WinslowGrid& grid) {
    std::vector<std::pair<int, int>> bad;
    if (grid.nx < 2 || grid.ny < 2) return bad;
    auto X = [&grid](int i, int j) { return grid.x[grid.idx(i, j)]; };
    auto Y = [&grid](int i, int j) { return grid.y[grid.idx(i, j)]; };
    for (int i = 0; i + 1 < grid.nx; ++i)
        for (int j = 0; j + 1 < grid.ny; ++j) {
            const double qx[4] = {X(i, j), X(i + 1, j), X(i + 1, j + 1), X(i, j + 1)};
            const double qy[4] = {Y(i, j), Y(i + 1, j), Y(i + 1, j + 1), Y(i, j + 1)};
            bool ok = true;
            for (int k = 0; k < 4 && ok; ++k) {
                const int k1 = (k + 1) % 4, k2 = (k + 2) % 4;
                if ((qx[k1] - qx[k]) * (qy[k2] - qy[k1]) -
                        (qy[k1] - qy[k]) * (qx[k2] - qx[k1]) <= 0.0)
                    ok = false;
            }
            if (!ok) bad.emplace_back(i, j);
        }
    return bad;
}

CompositionReport composition_residual(const WinslowGrid& grid, const HarmonicCornerMap& map,
                                       double misalign_tol) {
    if (grid.nx < 3 || grid.ny < 3 ||
        grid.x.size() != static_cast<std::size_t>(grid.nx) * grid.ny ||
        grid.y.size() != grid.x.size())
        throw validation_error("composition_residual: malformed grid");

    CompositionReport rep;
    double corner_r = std::numeric_limits<double>::infinity();
    double u_c = 0.0, v_c = 0.0;

    auto node = [&](int i, int j) { return cd(grid.x[grid.idx(i, j)], grid.y[grid.idx(i, j)]); };
    auto image_deviation = [&](int i, int j, const cd& z) {
        cd w;
        try {
            w = evaluate(map, z);
        } catch (const validation_error&) {
            throw validation_error("composition_residual: grid node outside the map's sector");
        }
        return std::abs(w - cd(grid.u_of(i), grid.v_of(j)));
    };

    auto boundary_visit = [&](int i, int j) {
        const cd z = node(i, j);
        rep.boundary_misalignment = std::max(rep.boundary_misalignment, image_deviation(i, j, z));
        if (std::abs(z) < corner_r) {
            corner_r = std::abs(z);
            u_c = grid.u_of(i);
            v_c = grid.v_of(j);
        }
    };
    for (int i = 0; i < grid.nx; ++i) { boundary_visit(i, 0); boundary_visit(i, grid.ny - 1); }
    for (int j = 1; j < grid.ny - 1; ++j) { boundary_visit(0, j); boundary_visit(grid.nx - 1, j); }

    if (rep.boundary_misalignment > misalign_tol) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.3e", rep.boundary_misalignment);
        throw validation_error(std::string("composition_residual: boundary data misaligned (max ") +
                               buf + ")");
    }

    for (int i = 1; i < grid.nx - 1; ++i)
        for (int j = 1; j < grid.ny - 1; ++j) {
            const double dev = image_deviation(i, j, node(i, j));
            const double u = grid.u_of(i);
            const double v = grid.v_of(j);
            rep.max_all = std::max(rep.max_all, dev);
            if (std::abs(u - u_c) <= 0.375 && v >= 0.25 && v <= 0.625)
                rep.max_away = std::max(rep.max_away, dev);
            if (std::hypot(u - u_c, v - v_c) <= 0.25)
                rep.max_near_corner = std::max(rep.max_near_corner, dev);
        }
    return rep;
}

} // namespace cornermap
