#pragma once

#include "cornermap/corner_asymptotics.hpp"
#include "cornermap/curve_tracer.hpp"
#include "cornermap/validation.hpp"
#include "cornermap/winslow.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cornermap {

// Shortest exact decimal representation used by every CSV writer; parsing it
// back with strtod reproduces the double bit-exactly.
std::string format_g17(double v);

// --- arc samples: phi,re,im ---
void write_arc_csv(const std::filesystem::path& path, const std::vector<ArcSample>& samples);
std::vector<ArcSample> read_arc_csv(const std::filesystem::path& path);

// --- map bundle: corner config + series coefficients ---
struct MapFile {
    CornerConfig config;
    SeriesCoefficients coeffs;
};
void write_coeffs_json(const std::filesystem::path& path, const CornerConfig& config,
                       const SeriesCoefficients& coeffs);
MapFile read_coeffs_json(const std::filesystem::path& path);

// --- traced curves: r,phi,u,v (inverse) or rho,theta,u,v (forward) ---
void write_curve_csv(const std::filesystem::path& path, const TracedCurve& curve);

// --- exit-angle laws ---
// Value of the law at x, if some piece contains it.
std::optional<double> angle_law_value(const AngleLaw& law, double x);
// Piece table: lo,lo_closed,hi,hi_closed,value.
void write_angle_law_csv(const std::filesystem::path& path, const AngleLaw& law);

// --- polyline bundles (mesh images) ---
void write_polylines_json(const std::filesystem::path& path, const std::vector<Polyline>& curves,
                          const std::vector<std::string>& warnings = {});
MeshImages read_polylines_json(const std::filesystem::path& path);

// --- winslow domains and grids ---
void write_domain_json(const std::filesystem::path& path, const DomainBoundary& domain);
DomainBoundary read_domain_json(const std::filesystem::path& path);
void write_grid_csv(const std::filesystem::path& path, const WinslowGrid& grid);
WinslowGrid read_grid_csv(const std::filesystem::path& path);
void write_solve_report_json(const std::filesystem::path& path, const SolveReport& report);

// --- validation suite report ---
void write_validation_csv(const std::filesystem::path& path, const ValidationReport& report);

} // namespace cornermap
