#pragma once

#include "cornermap/harmonic_map.hpp"

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace cornermap {

// Contiguous vertex index range [begin, end] of one square side's sub-arc.
struct SideRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Closed counterclockwise polyline (first vertex repeated at the end) split
// into the four square sides in traversal order bottom, right, top, left.
struct DomainBoundary {
    std::vector<std::complex<double>> vertices;
    std::array<SideRange, 4> side_map; // bottom, right, top, left
    std::vector<std::size_t> corner_markers;
};

// Structured grid over the parameter square u in [-1/2,1/2], v in [0,1],
// stored row-major with idx(i, j) = i*ny + j.
struct WinslowGrid {
    int nx = 0;
    int ny = 0;
    std::vector<double> x;
    std::vector<double> y;

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
               static_cast<std::size_t>(j);
    }
    double u_of(int i) const { return -0.5 + static_cast<double>(i) / (nx - 1); }
    double v_of(int j) const { return static_cast<double>(j) / (ny - 1); }
};

struct WinslowOptions {
    double tol = 1e-10;
    int max_iters = 0; // 0 -> 200 * max(nx, ny)
    double relaxation = 1.7;
};

struct SolveReport {
    int iterations = 0;
    double initial_residual = 0.0;
    double final_update = 0.0;
    bool converged = false;
    int bbox_violations = 0;
    std::vector<std::pair<int, int>> fold_cells;
    std::vector<double> update_history;
};

// Per-region max deviation |F(grid node) - lattice point| of the composed map.
struct CompositionReport {
    double max_all = 0.0;
    double max_away = 0.0;        // |u-u_c| <= 0.375, v in [0.25, 0.625]
    double max_near_corner = 0.0; // within (u,v)-distance 0.25 of the corner preimage
    double boundary_misalignment = 0.0;
};

// Orientation, closure, and side-partition checks; throws validation_error.
void validate_domain(const DomainBoundary& domain);

// Sector boundary: straight sides A -> 0 -> B as the square bottom, the arc
// B -> A split at the given arclength fractions (snapped to polyline vertices)
// into the right/top/left sides.  The corner vertex is marked.
DomainBoundary make_sector_domain(const CornerConfig& config, int arc_segments = 512,
                                  double split0 = 0.25, double split1 = 0.7);

// Square boundary values carried by the arc under the constant-speed side
// parameterization; the samples feed fit_from_arc so that the fitted map and
// the mesh boundary describe the same correspondence.
std::vector<ArcSample> boundary_square_values_on_arc(const DomainBoundary& domain,
                                                     int n_samples);

// Arclength-proportional nodes per side; top is stored with increasing u and
// left with increasing v (reversed from polyline traversal order).
struct BoundaryNodes {
    std::vector<std::complex<double>> bottom; // nx
    std::vector<std::complex<double>> right;  // ny
    std::vector<std::complex<double>> top;    // nx
    std::vector<std::complex<double>> left;   // ny
};
BoundaryNodes parameterize_boundary(const DomainBoundary& domain, int nx, int ny);

// Transfinite (bilinear blending) interpolation of the boundary nodes.
WinslowGrid transfinite_grid(const BoundaryNodes& nodes, int nx, int ny);

// Frozen-coefficient SOR for the quasilinear inverse-map system.  Returns the
// grid and a report; non-convergence is reported, NaN divergence throws.
std::pair<WinslowGrid, SolveReport> solve(const DomainBoundary& domain, int nx, int ny,
                                          const WinslowOptions& options = {});

// Cells (i, j) whose four signed triangle areas of consecutive corners are not
// all strictly positive (counterclockwise orientation convention).
std::vector<std::pair<int, int>> fold_cells(const WinslowGrid& grid);

// Deviation of F(grid) from the uniform lattice, split by region.  Throws when
// the grid's boundary does not carry the map's boundary data (misalignment) or
// when nodes leave the map's sector.
CompositionReport composition_residual(const WinslowGrid& grid, const HarmonicCornerMap& map,
                                       double misalign_tol = 0.05);

} // namespace cornermap
