// cornermap: batch front end for the harmonic corner-map library.
//
// Subcommands: angles, trace, mesh-images, winslow, validate, fit.
// A config file (--config, key=value with [subcommand] sections) supplies
// defaults; command-line flags override it.
//
// Exit codes: 0 success, 2 validation failure, 3 solver non-convergence,
// 4 bad input, 1 anything else.

#include "CLI11.hpp"

#include <cornermap/corner_asymptotics.hpp>
#include <cornermap/curve_tracer.hpp>
#include <cornermap/io.hpp>
#include <cornermap/svg.hpp>
#include <cornermap/validation.hpp>
#include <cornermap/winslow.hpp>

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cornermap;

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Synthetic coefficient set used when no --coeffs file is given: geometric
// decay with alternating-sign a_n, admissible (b1 > 0, a1 != 0) for any beta.
SeriesCoefficients default_coeffs(int n_terms = 8) {
    SeriesCoefficients c;
    c.a.resize(n_terms);
    c.b.resize(n_terms);
    double a = 0.9, b = 1.1;
    for (int k = 0; k < n_terms; ++k) {
        c.a[k] = a;
        c.b[k] = b;
        a *= -0.3;
        b *= 0.3;
    }
    return c;
}

struct MapOpts {
    std::string coeffs_path;
    double beta = 0.5;
    double sigma_plus = 1.0;
    double sigma_minus = 1.0;
    double radius = 1.0;
};

void add_config_options(CLI::App* cmd, MapOpts& o) {
    cmd->add_option("--beta", o.beta, "corner opening / pi, in (0,1) or (1,2)");
    cmd->add_option("--sigma-plus", o.sigma_plus, "boundary speed on the lower straight side");
    cmd->add_option("--sigma-minus", o.sigma_minus, "boundary speed on the upper straight side");
    cmd->add_option("--radius", o.radius, "sector radius R");
}

void add_map_options(CLI::App* cmd, MapOpts& o) {
    add_config_options(cmd, o);
    cmd->add_option("--coeffs", o.coeffs_path,
                    "coefficient JSON file; replaces the synthetic map and its config");
}

CornerConfig config_of(const MapOpts& o) {
    return CornerConfig{o.beta, o.sigma_plus, o.sigma_minus, o.radius};
}

HarmonicCornerMap load_map(const MapOpts& o) {
    if (!o.coeffs_path.empty()) {
        MapFile f = read_coeffs_json(o.coeffs_path);
        return make_map(f.config, f.coeffs);
    }
    return make_map(config_of(o), default_coeffs());
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
    fs::create_directories(dir);
    return dir;
}

void note(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

std::pair<int, int> parse_grid(const std::string& s) {
    auto to_int = [&](std::string_view sv) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (ec != std::errc{} || ptr != sv.data() + sv.size())
            throw io_error("--grid expects NX,NY integers, got '" + s + "'");
        return v;
    };
    std::string_view sv(s);
    auto comma = sv.find(',');
    if (comma == std::string_view::npos) {
        int n = to_int(sv);
        return {n, n};
    }
    return {to_int(sv.substr(0, comma)), to_int(sv.substr(comma + 1))};
}

std::ofstream open_table(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open " + path.string() + " for writing");
    return f;
}

// ---------------------------------------------------------------- angles ---

void write_law_samples_csv(const fs::path& path, const AngleLaw& law, double lo, double hi,
                           int n, const char* xname, const char* yname, const char* cname,
                           double (*conformal)(double, double), double beta) {
    std::ofstream f = open_table(path);
    f << xname << ',' << yname << ',' << cname << '\n';
    for (int k = 0; k < n; ++k) {
        const double x = lo + (hi - lo) * k / (n - 1);
        const auto y = angle_law_value(law, x);
        if (!y) continue; // open law endpoints carry no value
        f << format_g17(x) << ',' << format_g17(*y) << ','
          << format_g17(conformal(beta, x)) << '\n';
    }
    note(path);
}

void plot_law(const fs::path& path, const AngleLaw& law, double xlo, double xhi, double ylo,
              double yhi, double companion_y, const std::string& companion_label,
              const std::string& jump_label, const char* xlabel, const char* ylabel,
              double (*conformal)(double, double), double beta) {
    const double ypad = 0.18 * (yhi - ylo);
    SvgPlot p(640, 480, xlo, xhi, ylo - ypad, yhi + ypad);
    p.frame_with_ticks(5);

    p.polyline({{xlo, conformal(beta, xlo)}, {xhi, conformal(beta, xhi)}}, "#999999", 1.0, "6,4");
    p.text(xlo + 0.02 * (xhi - xlo), conformal(beta, xlo + 0.05 * (xhi - xlo)) + 0.06 * (yhi - ylo),
           "conformal", 11, "#999999");

    p.segment(xlo, companion_y, xhi, companion_y, "#bbbbbb", 0.8, "2,3");
    p.text(xhi - 0.16 * (xhi - xlo), companion_y + 0.02 * (yhi - ylo),
           companion_label + " = " + fmt("%.6g", companion_y), 11, "#777777");

    if (law.has_interior_jump) {
        p.segment(law.jump_location, ylo - ypad, law.jump_location, yhi + ypad, "#d62728", 1.0,
                  "5,4");
        p.text(law.jump_location + 0.01 * (xhi - xlo), yhi + 0.55 * ypad,
               jump_label + " = " + fmt("%.6g", law.jump_location) + ", jump " +
                   fmt("%.6g", law.jump_magnitude),
               11, "#d62728");
    }

    for (const auto& pc : law.pieces) {
        if (pc.lo == pc.hi) {
            p.marker(pc.lo, pc.value, 4.0, "#d62728");
        } else {
            p.segment(pc.lo, pc.value, pc.hi, pc.value, "#1f77b4", 2.5);
            p.marker(pc.lo, pc.value, 3.0, pc.lo_closed ? "#1f77b4" : "#ffffff");
            p.marker(pc.hi, pc.value, 3.0, pc.hi_closed ? "#1f77b4" : "#ffffff");
        }
    }

    p.text((xlo + xhi) / 2, ylo - 0.85 * ypad, xlabel, 12);
    p.text(xlo + 0.02 * (xhi - xlo), yhi + 0.55 * ypad, ylabel, 12);
    write_svg(path, p);
    note(path);
}

void run_angles(const MapOpts& mo, const std::string& out, int n_samples) {
    const fs::path dir = ensure_out_dir(out);
    const HarmonicCornerMap m = load_map(mo);
    const AsymptoticKit kit = make_kit(m);
    const double hb = half_angle(m.config);
    const double beta = m.config.beta;
    const double pi = std::acos(-1.0);

    const AngleLaw law_pt = phi_of_theta_law(kit);
    const AngleLaw law_tp = theta_of_phi_law(kit);

    write_angle_law_csv(dir / "angle_law_phi_of_theta.csv", law_pt);
    note(dir / "angle_law_phi_of_theta.csv");
    write_angle_law_csv(dir / "angle_law_theta_of_phi.csv", law_tp);
    note(dir / "angle_law_theta_of_phi.csv");

    write_law_samples_csv(dir / "angles_phi_of_theta.csv", law_pt, 0.0, pi, n_samples, "theta",
                          "phi", "conformal_phi", &conformal_phi_of_theta, beta);
    write_law_samples_csv(dir / "angles_theta_of_phi.csv", law_tp, -hb, hb, n_samples, "phi",
                          "theta", "conformal_theta", &conformal_theta_of_phi, beta);

    plot_law(dir / "angles_phi_of_theta.svg", law_pt, 0.0, pi, -hb, hb, m.derived.phi_star,
             "phi*", "theta*", "theta", "phi(theta)", &conformal_phi_of_theta, beta);
    plot_law(dir / "angles_theta_of_phi.svg", law_tp, -hb, hb, 0.0, pi, kit.theta_star, "theta*",
             "phi*", "phi", "theta(phi)", &conformal_theta_of_phi, beta);

    std::cout << "beta=" << fmt("%.6g", beta) << " phi*=" << fmt("%.6g", m.derived.phi_star)
              << " theta*=" << fmt("%.6g", kit.theta_star)
              << " interior jumps: phi(theta) " << (law_pt.has_interior_jump ? "yes" : "no")
              << ", theta(phi) " << (law_tp.has_interior_jump ? "yes" : "no") << "\n";
}

// ----------------------------------------------------------------- trace ---

void run_trace(const MapOpts& mo, const std::string& out, const std::vector<double>& thetas,
               const std::vector<double>& phis, double rmin, double rmax, int per_decade) {
    if (thetas.empty() && phis.empty())
        throw io_error("trace: provide at least one --theta (inverse) or --phi (forward) ray");
    const fs::path dir = ensure_out_dir(out);
    const HarmonicCornerMap m = load_map(mo);
    const AsymptoticKit kit = make_kit(m);
    const std::vector<double> radii = log_spaced_radii(rmin, rmax, per_decade);

    std::ofstream summary = open_table(dir / "trace_summary.csv");
    summary << "kind,angle,limit,order,fit_residual,max_dev,rms_dev,remainder_measured,"
               "remainder_expected\n";

    auto process = [&](const TracedCurve& curve, const char* kind, double angle) {
        const fs::path csv =
            dir / (std::string(kind) + "_" + fmt("%.6g", angle) + ".csv");
        write_curve_csv(csv, curve);
        note(csv);
        const ExitAngleEstimate est = estimate_exit_angle(curve, kit);
        const DiscrepancyReport rep = compare_with_asymptotics(curve, kit);
        summary << kind << ',' << format_g17(angle) << ',' << format_g17(est.limit_angle) << ','
                << (est.order_estimate ? format_g17(*est.order_estimate) : std::string()) << ','
                << format_g17(est.fit_residual) << ',' << format_g17(rep.max_abs) << ','
                << format_g17(rep.rms) << ',' << format_g17(rep.remainder_exponent) << ','
                << format_g17(rep.expected_remainder_exponent) << '\n';
        std::cout << kind << " angle=" << fmt("%.6g", angle)
                  << ": limit=" << fmt("%.6g", est.limit_angle) << " order="
                  << (est.order_estimate ? fmt("%.6g", *est.order_estimate)
                                         : std::string("exact"))
                  << " residual=" << fmt("%.3g", est.fit_residual)
                  << " max_dev=" << fmt("%.3g", rep.max_abs) << "\n";
    };

    for (double theta : thetas) process(trace_inverse_ray(m, theta, radii), "inverse_theta", theta);
    for (double phi : phis) process(trace_forward_ray(m, phi, radii), "forward_phi", phi);
    note(dir / "trace_summary.csv");
}

// ----------------------------------------------------------- mesh-images ---

std::vector<std::complex<double>> sector_boundary_points(const CornerConfig& cfg) {
    const double hb = half_angle(cfg);
    std::vector<std::complex<double>> pts;
    pts.emplace_back(std::polar(cfg.radius, hb));
    pts.emplace_back(0.0, 0.0);
    pts.emplace_back(std::polar(cfg.radius, -hb));
    for (int k = 1; k <= 180; ++k)
        pts.push_back(std::polar(cfg.radius, -hb + 2 * hb * k / 180.0));
    return pts;
}

std::vector<std::complex<double>> image_boundary_points(const HarmonicCornerMap& m) {
    const double hb = half_angle(m.config);
    const double R = m.config.radius;
    std::vector<std::complex<double>> pts;
    pts.emplace_back(0.0, 0.0);
    for (int k = 0; k <= 360; ++k)
        pts.push_back(evaluate(m, R, -hb + 2 * hb * k / 360.0));
    pts.emplace_back(0.0, 0.0);
    return pts;
}

void plot_layers(const fs::path& path, const std::vector<std::complex<double>>& boundary,
                 const std::vector<Polyline>& under, const std::vector<Polyline>& mains) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    auto grow = [&](const std::vector<std::complex<double>>& pts) {
        for (auto z : pts) {
            xlo = std::min(xlo, z.real());
            xhi = std::max(xhi, z.real());
            ylo = std::min(ylo, z.imag());
            yhi = std::max(yhi, z.imag());
        }
    };
    grow(boundary);
    for (const auto& c : under) grow(c.points);
    for (const auto& c : mains) grow(c.points);
    const double padx = 0.06 * (xhi - xlo), pady = 0.06 * (yhi - ylo);
    SvgPlot p(640, 560, xlo - padx, xhi + padx, ylo - pady, yhi + pady);
    p.frame_with_ticks(5);
    for (const auto& c : under) p.polyline(c.points, "#cccccc", 0.8, "4,3");
    std::size_t idx = 0;
    for (const auto& c : mains) p.polyline(c.points, palette_color(idx++), 1.4);
    p.polyline(boundary, "#000000", 1.6);
    write_svg(path, p);
    note(path);
}

void run_mesh_images(const MapOpts& mo, const std::string& out, const std::string& plane,
                     double scale, int points) {
    const fs::path dir = ensure_out_dir(out);
    const HarmonicCornerMap m = load_map(mo);
    const double beta = m.config.beta;

    auto warn_all = [](const std::vector<std::string>& warnings) {
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    };

    if (plane == "image" || plane == "both") {
        PolarMeshSpec spec;
        spec.plane = PolarMeshSpec::Plane::image_w;
        spec.scale = scale > 0 ? scale : default_xi_scale(m);
        spec.points_per_curve = points;
        const std::vector<Polyline> xi = polar_mesh(spec, beta);
        const MeshImages pre = mesh_images(m, spec);
        warn_all(pre.warnings);
        write_polylines_json(dir / "xi_grid.json", xi);
        note(dir / "xi_grid.json");
        write_polylines_json(dir / "xi_preimages.json", pre.curves, pre.warnings);
        note(dir / "xi_preimages.json");

        PolarMeshSpec tspec;          // domain-plane reference underlay
        tspec.plane = PolarMeshSpec::Plane::domain_z;
        tspec.scale = m.config.radius;
        tspec.points_per_curve = points;
        plot_layers(dir / "xi_preimages.svg", sector_boundary_points(m.config),
                    polar_mesh(tspec, beta), pre.curves);
        std::cout << "image-plane grid scale " << fmt("%.6g", spec.scale) << ", "
                  << pre.curves.size() << " preimage curves, " << pre.warnings.size()
                  << " warnings\n";
    }
    if (plane == "domain" || plane == "both") {
        PolarMeshSpec spec;
        spec.plane = PolarMeshSpec::Plane::domain_z;
        spec.scale = scale > 0 ? scale : m.config.radius;
        spec.points_per_curve = points;
        const std::vector<Polyline> tgrid = polar_mesh(spec, beta);
        const MeshImages img = mesh_images(m, spec);
        warn_all(img.warnings);
        write_polylines_json(dir / "t_grid.json", tgrid);
        note(dir / "t_grid.json");
        write_polylines_json(dir / "t_images.json", img.curves, img.warnings);
        note(dir / "t_images.json");

        PolarMeshSpec xspec;          // image-plane reference underlay
        xspec.plane = PolarMeshSpec::Plane::image_w;
        xspec.scale = default_xi_scale(m);
        xspec.points_per_curve = points;
        plot_layers(dir / "t_images.svg", image_boundary_points(m),
                    polar_mesh(xspec, beta), img.curves);
        std::cout << "domain-plane grid scale " << fmt("%.6g", spec.scale) << ", "
                  << img.curves.size() << " image curves, " << img.warnings.size()
                  << " warnings\n";
    }
}

// --------------------------------------------------------------- winslow ---

void plot_grid(const fs::path& path, const WinslowGrid& g, const SolveReport& rep,
               const DomainBoundary& domain) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
        xlo = std::min(xlo, g.x[k]);
        xhi = std::max(xhi, g.x[k]);
        ylo = std::min(ylo, g.y[k]);
        yhi = std::max(yhi, g.y[k]);
    }
    const double padx = 0.05 * (xhi - xlo), pady = 0.05 * (yhi - ylo);
    SvgPlot p(640, 640, xlo - padx, xhi + padx, ylo - pady, yhi + pady);
    p.frame_with_ticks(5);

    auto at = [&](int i, int j) { return std::complex<double>(g.x[g.idx(i, j)], g.y[g.idx(i, j)]); };
    for (const auto& [i, j] : rep.fold_cells)
        p.quad(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1), "#d62728", 0.45);

    std::vector<std::complex<double>> line;
    for (int i = 0; i < g.nx; ++i) {
        line.clear();
        for (int j = 0; j < g.ny; ++j) line.push_back(at(i, j));
        const bool edge = (i == 0 || i == g.nx - 1);
        p.polyline(line, edge ? "#000000" : "#1f77b4", edge ? 1.4 : 0.6);
    }
    for (int j = 0; j < g.ny; ++j) {
        line.clear();
        for (int i = 0; i < g.nx; ++i) line.push_back(at(i, j));
        const bool edge = (j == 0 || j == g.ny - 1);
        p.polyline(line, edge ? "#000000" : "#1f77b4", edge ? 1.4 : 0.6);
    }
    for (std::size_t v : domain.corner_markers)
        p.marker(domain.vertices[v].real(), domain.vertices[v].imag(), 4.0, "#d62728");
    write_svg(path, p);
    note(path);
}

int run_winslow(const MapOpts& mo, const std::string& domain_path, const std::string& out,
                const std::string& grid_spec, double tol, double relaxation, int max_iters,
                int arc_segments, bool compose) {
    const fs::path dir = ensure_out_dir(out);
    const DomainBoundary domain = domain_path.empty()
                                      ? make_sector_domain(config_of(mo), arc_segments)
                                      : read_domain_json(domain_path);
    const auto [nx, ny] = parse_grid(grid_spec);

    WinslowOptions opt;
    opt.tol = tol;
    opt.relaxation = relaxation;
    opt.max_iters = max_iters;
    const auto [grid, report] = solve(domain, nx, ny, opt);

    write_domain_json(dir / "domain.json", domain);
    note(dir / "domain.json");
    write_grid_csv(dir / "grid.csv", grid);
    note(dir / "grid.csv");
    write_solve_report_json(dir / "solve_report.json", report);
    note(dir / "solve_report.json");
    plot_grid(dir / "winslow.svg", grid, report, domain);

    std::cout << "grid " << nx << "x" << ny << ": " << report.iterations << " sweeps, "
              << (report.converged ? "converged" : "NOT converged")
              << ", final update " << fmt("%.3g", report.final_update) << ", "
              << report.fold_cells.size() << " folded cells, " << report.bbox_violations
              << " bbox violations\n";

    if (compose) {
        // With no coefficient file the composed map is fitted from the mesh's
        // own boundary correspondence: square data at speed 1/(2R) on the
        // straight sides.  A custom --domain needs an explicit --coeffs map.
        const HarmonicCornerMap m = [&] {
            if (!mo.coeffs_path.empty()) return load_map(mo);
            if (!domain_path.empty())
                throw io_error("--compose with --domain requires --coeffs");
            CornerConfig cfg = config_of(mo);
            cfg.sigma_plus = cfg.sigma_minus = 0.5 / cfg.radius;
            const auto samples = boundary_square_values_on_arc(domain, 4097);
            return make_map(cfg, fit_from_arc(cfg, derive_params(cfg), samples, 24));
        }();
        const CompositionReport comp = composition_residual(grid, m);
        std::cout << "composition residual: all " << fmt("%.3g", comp.max_all) << ", away "
                  << fmt("%.3g", comp.max_away) << ", near corner "
                  << fmt("%.3g", comp.max_near_corner) << ", boundary misalignment "
                  << fmt("%.3g", comp.boundary_misalignment) << "\n";
    }

    if (!report.converged) {
        std::cerr << "winslow: no convergence after " << report.iterations
                  << " sweeps (final update " << fmt("%.3g", report.final_update) << ")\n";
        return 3;
    }
    return 0;
}

// -------------------------------------------------------------- validate ---

int run_validate(const std::string& coeffs_path, const std::string& out, std::uint64_t seed,
                 int sets_per_beta) {
    if (!coeffs_path.empty()) {
        // File-check mode: admissibility of a stored coefficient set.
        const MapFile f = read_coeffs_json(coeffs_path);
        const HarmonicCornerMap m = make_map(f.config, f.coeffs);
        std::cout << "coefficients admissible: beta=" << fmt("%.6g", m.config.beta)
                  << " n_terms=" << m.coeffs.n_terms() << " a1=" << fmt("%.6g", m.coeffs.a1())
                  << " b1=" << fmt("%.6g", m.coeffs.b1()) << "\n";
        return 0;
    }

    const fs::path dir = ensure_out_dir(out);
    const ValidationReport report = run_validation_suite(seed, sets_per_beta);
    write_validation_csv(dir / "validation.csv", report);
    note(dir / "validation.csv");

    std::printf("%-6s %-4s %-34s %12s %12s %10s %10s %9s %s\n", "beta", "set", "curve",
                "limit", "measured", "order", "measured", "residual", "pass");
    int n_pass = 0;
    for (const auto& r : report.rows) {
        std::printf("%-6.3g %-4d %-34s %12.6f %12.6f %10.4f %10.4f %9.2e %s\n", r.beta,
                    r.set_index, r.curve.c_str(), r.expected_limit, r.measured_limit,
                    r.expected_order, r.measured_order, r.fit_residual,
                    r.pass ? "ok" : "FAIL");
        n_pass += r.pass ? 1 : 0;
    }
    std::cout << n_pass << "/" << report.rows.size() << " rows pass (seed " << report.seed
              << ")\n";
    return report.all_pass ? 0 : 2;
}

// ------------------------------------------------------------------- fit ---

void run_fit(const MapOpts& mo, const std::string& arc_path, const std::string& out,
             int n_terms) {
    const fs::path dir = ensure_out_dir(out);
    const CornerConfig cfg = config_of(mo);
    validate_config(cfg);
    const std::vector<ArcSample> samples = read_arc_csv(arc_path);
    const SeriesCoefficients coeffs =
        fit_from_arc(cfg, derive_params(cfg), samples, n_terms);
    const HarmonicCornerMap m = make_map(cfg, coeffs);

    double resid = 0.0;
    for (const auto& s : samples)
        resid = std::max(resid, std::abs(evaluate(m, cfg.radius, s.phi) - s.value));

    write_coeffs_json(dir / "coeffs.json", cfg, coeffs);
    note(dir / "coeffs.json");
    std::cout << "fit " << n_terms << " terms from " << samples.size()
              << " samples: a1=" << fmt("%.6g", coeffs.a1()) << " b1=" << fmt("%.6g", coeffs.b1())
              << " max arc residual " << fmt("%.3g", resid) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic corner maps: exit-angle laws, curve tracing, winslow meshes"};
    app.set_config("--config", "", "config file (key=value with [subcommand] sections)");
    app.require_subcommand(1);

    int exit_code = 0;

    struct {
        MapOpts map;
        std::string out = ".";
        int samples = 721;
    } ao;
    auto* angles = app.add_subcommand("angles", "tabulate and plot the exit-angle laws");
    angles->fallthrough();
    add_map_options(angles, ao.map);
    angles->add_option("--out", ao.out, "output directory");
    angles->add_option("--samples", ao.samples, "rows in the sampled tables")
        ->check(CLI::Range(2, 1000000));
    angles->callback([&] { run_angles(ao.map, ao.out, ao.samples); });

    struct {
        MapOpts map;
        std::string out = ".";
        std::vector<double> thetas, phis;
        double rmin = 1e-6, rmax = 1e-1;
        int per_decade = 48;
    } to;
    auto* trace = app.add_subcommand("trace", "trace level curves / ray images toward the corner");
    trace->fallthrough();
    add_map_options(trace, to.map);
    trace->add_option("--out", to.out, "output directory");
    trace->add_option("--theta", to.thetas, "image-ray angle(s) for inverse level curves");
    trace->add_option("--phi", to.phis, "domain-ray angle(s) for forward ray images");
    trace->add_option("--rmin", to.rmin, "innermost radius of the tracing window");
    trace->add_option("--rmax", to.rmax, "outermost radius of the tracing window");
    trace->add_option("--per-decade", to.per_decade, "radii per decade")
        ->check(CLI::Range(2, 10000));
    trace->callback(
        [&] { run_trace(to.map, to.out, to.thetas, to.phis, to.rmin, to.rmax, to.per_decade); });

    struct {
        MapOpts map;
        std::string out = ".";
        std::string plane = "both";
        double scale = 0.0;
        int points = 201;
    } mi;
    auto* mesh = app.add_subcommand("mesh-images", "polar mesh preimages/images");
    mesh->fallthrough();
    add_map_options(mesh, mi.map);
    mesh->add_option("--out", mi.out, "output directory");
    mesh->add_option("--plane", mi.plane, "which polar grid to transport")
        ->check(CLI::IsMember({"image", "domain", "both"}));
    mesh->add_option("--scale", mi.scale, "outermost circle radius (0 = automatic)");
    mesh->add_option("--points", mi.points, "samples per grid curve")
        ->check(CLI::Range(2, 100000));
    mesh->callback([&] { run_mesh_images(mi.map, mi.out, mi.plane, mi.scale, mi.points); });

    struct {
        MapOpts map;
        std::string domain_path;
        std::string out = ".";
        std::string grid = "33,33";
        double tol = 1e-10;
        double relaxation = 1.7;
        int max_iters = 0;
        int arc_segments = 512;
        bool compose = false;
    } wo;
    auto* winslow = app.add_subcommand("winslow", "inverse-map mesh solve with fold detection");
    winslow->fallthrough();
    add_map_options(winslow, wo.map);
    winslow->add_option("--domain", wo.domain_path,
                        "domain boundary JSON (default: sector from the corner config)");
    winslow->add_option("--out", wo.out, "output directory");
    winslow->add_option("--grid", wo.grid, "grid size NX,NY");
    winslow->add_option("--tol", wo.tol, "SOR update tolerance");
    winslow->add_option("--relaxation", wo.relaxation, "SOR relaxation factor");
    winslow->add_option("--max-iters", wo.max_iters, "sweep cap (0 = 200 max(nx,ny))");
    winslow->add_option("--arc-segments", wo.arc_segments, "sector arc resolution")
        ->check(CLI::Range(8, 1000000));
    winslow->add_flag("--compose", wo.compose,
                      "also report |F(grid) - lattice| against the corner map");
    winslow->callback([&] {
        exit_code = run_winslow(wo.map, wo.domain_path, wo.out, wo.grid, wo.tol, wo.relaxation,
                                wo.max_iters, wo.arc_segments, wo.compose);
    });

    struct {
        std::string coeffs_path;
        std::string out = ".";
        std::uint64_t seed = kDefaultValidationSeed;
        int sets = 5;
    } vo;
    auto* validate = app.add_subcommand(
        "validate", "oracle-vs-asymptote suite, or admissibility check of a coefficient file");
    validate->fallthrough();
    validate->add_option("--coeffs", vo.coeffs_path,
                         "check this coefficient file instead of running the suite");
    validate->add_option("--out", vo.out, "output directory");
    validate->add_option("--seed", vo.seed, "fixture seed");
    validate->add_option("--sets", vo.sets, "fixture sets per beta")->check(CLI::Range(1, 1000));
    validate->callback(
        [&] { exit_code = run_validate(vo.coeffs_path, vo.out, vo.seed, vo.sets); });

    struct {
        MapOpts map;
        std::string arc_path;
        std::string out = ".";
        int n_terms = 8;
    } fo;
    auto* fit = app.add_subcommand("fit", "recover series coefficients from arc samples");
    fit->fallthrough();
    add_config_options(fit, fo.map);
    fit->add_option("--arc", fo.arc_path, "arc sample CSV (phi,re,im)")->required();
    fit->add_option("--out", fo.out, "output directory");
    fit->add_option("--n-terms", fo.n_terms, "series length")->check(CLI::Range(2, 64));
    fit->callback([&] { run_fit(fo.map, fo.arc_path, fo.out, fo.n_terms); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int c = app.exit(e);
        return c == 0 ? 0 : 4;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
