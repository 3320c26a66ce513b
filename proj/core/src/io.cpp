#include "cornermap/io.hpp"

#include "cornermap/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cornermap {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw io_error("malformed number '" + s + "' in " + path.string());
    return v;
}

long parse_long(const std::string& s, const std::filesystem::path& path) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw io_error("malformed integer '" + s + "' in " + path.string());
    return v;
}

json parse_json_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw io_error("malformed JSON in " + path.string() + ": " + e.what());
    }
}

json point_array(const std::vector<std::complex<double>>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({p.real(), p.imag()});
    return arr;
}

std::vector<std::complex<double>> read_point_array(const json& arr,
                                                   const std::filesystem::path& path) {
    std::vector<std::complex<double>> out;
    if (!arr.is_array()) throw io_error("expected point array in " + path.string());
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2)
            throw io_error("expected [x, y] pairs in " + path.string());
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_arc_csv(const std::filesystem::path& path, const std::vector<ArcSample>& samples) {
    auto out = open_out(path);
    out << "phi,re,im\n";
    for (const auto& s : samples)
        out << format_g17(s.phi) << ',' << format_g17(s.value.real()) << ','
            << format_g17(s.value.imag()) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

std::vector<ArcSample> read_arc_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<ArcSample> samples;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 3)
            throw io_error("expected 3 columns (phi,re,im) in " + path.string());
        ArcSample s;
        s.phi = parse_double(cells[0], path);
        s.value = {parse_double(cells[1], path), parse_double(cells[2], path)};
        samples.push_back(s);
    }
    if (samples.empty()) throw io_error("no samples in " + path.string());
    return samples;
}

void write_coeffs_json(const std::filesystem::path& path, const CornerConfig& config,
                       const SeriesCoefficients& coeffs) {
    json j;
    j["beta"] = config.beta;
    j["sigma_plus"] = config.sigma_plus;
    j["sigma_minus"] = config.sigma_minus;
    j["radius"] = config.radius;
    j["a"] = coeffs.a;
    j["b"] = coeffs.b;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

MapFile read_coeffs_json(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    MapFile mf;
    try {
        mf.config.beta = j.at("beta").get<double>();
        mf.config.sigma_plus = j.at("sigma_plus").get<double>();
        mf.config.sigma_minus = j.at("sigma_minus").get<double>();
        mf.config.radius = j.at("radius").get<double>();
        mf.coeffs.a = j.at("a").get<std::vector<double>>();
        mf.coeffs.b = j.at("b").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw io_error("bad coefficient file " + path.string() + ": " + e.what());
    }
    validate_config(mf.config);
    validate_coeffs(mf.coeffs);
    return mf;
}

void write_curve_csv(const std::filesystem::path& path, const TracedCurve& curve) {
    const bool inverse = curve.kind == TracedCurve::Kind::inverse_level_curve;
    const bool with_image = curve.w.size() == curve.parameter.size();
    auto out = open_out(path);
    out << (inverse ? "r,phi" : "rho,theta");
    if (with_image) out << ",u,v";
    out << '\n';
    for (std::size_t i = 0; i < curve.parameter.size(); ++i) {
        out << format_g17(curve.parameter[i]) << ',' << format_g17(curve.ordinate[i]);
        if (with_image)
            out << ',' << format_g17(curve.w[i].real()) << ',' << format_g17(curve.w[i].imag());
        out << '\n';
    }
    if (!out) throw io_error("write failed: " + path.string());
}

std::optional<double> angle_law_value(const AngleLaw& law, double x) {
    for (const auto& p : law.pieces) {
        const bool above = p.lo_closed ? x >= p.lo : x > p.lo;
        const bool below = p.hi_closed ? x <= p.hi : x < p.hi;
        if (above && below) return p.value;
    }
    return std::nullopt;
}

void write_angle_law_csv(const std::filesystem::path& path, const AngleLaw& law) {
    auto out = open_out(path);
    out << "lo,lo_closed,hi,hi_closed,value\n";
    for (const auto& p : law.pieces)
        out << format_g17(p.lo) << ',' << (p.lo_closed ? 1 : 0) << ',' << format_g17(p.hi) << ','
            << (p.hi_closed ? 1 : 0) << ',' << format_g17(p.value) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

void write_polylines_json(const std::filesystem::path& path, const std::vector<Polyline>& curves,
                          const std::vector<std::string>& warnings) {
    json j;
    j["curves"] = json::array();
    for (const auto& c : curves) {
        json jc;
        jc["label"] = c.label;
        jc["points"] = point_array(c.points);
        j["curves"].push_back(std::move(jc));
    }
    j["warnings"] = warnings;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

MeshImages read_polylines_json(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    MeshImages mi;
    try {
        for (const auto& jc : j.at("curves")) {
            Polyline c;
            c.label = jc.at("label").get<std::string>();
            c.points = read_point_array(jc.at("points"), path);
            mi.curves.push_back(std::move(c));
        }
        if (j.contains("warnings"))
            mi.warnings = j.at("warnings").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw io_error("bad polyline file " + path.string() + ": " + e.what());
    }
    return mi;
}

void write_domain_json(const std::filesystem::path& path, const DomainBoundary& domain) {
    json j;
    j["vertices"] = point_array(domain.vertices);
    json sides = json::array();
    for (const auto& s : domain.side_map) sides.push_back({s.begin, s.end});
    j["side_map"] = std::move(sides);
    j["corner_markers"] = domain.corner_markers;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

DomainBoundary read_domain_json(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    DomainBoundary d;
    try {
        d.vertices = read_point_array(j.at("vertices"), path);
        const auto& sides = j.at("side_map");
        if (!sides.is_array() || sides.size() != 4)
            throw io_error("side_map must list 4 ranges in " + path.string());
        for (int k = 0; k < 4; ++k) {
            d.side_map[static_cast<std::size_t>(k)] = {sides[k][0].get<std::size_t>(),
                                                       sides[k][1].get<std::size_t>()};
        }
        if (j.contains("corner_markers"))
            d.corner_markers = j.at("corner_markers").get<std::vector<std::size_t>>();
    } catch (const json::exception& e) {
        throw io_error("bad domain file " + path.string() + ": " + e.what());
    }
    validate_domain(d);
    return d;
}

void write_grid_csv(const std::filesystem::path& path, const WinslowGrid& grid) {
    auto out = open_out(path);
    out << "i,j,x,y\n";
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            out << i << ',' << j << ',' << format_g17(grid.x[grid.idx(i, j)]) << ','
                << format_g17(grid.y[grid.idx(i, j)]) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

WinslowGrid read_grid_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    bool header = true;
    struct Row {
        long i, j;
        double x, y;
    };
    std::vector<Row> rows;
    long max_i = -1, max_j = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 4)
            throw io_error("expected 4 columns (i,j,x,y) in " + path.string());
        Row r;
        r.i = parse_long(cells[0], path);
        r.j = parse_long(cells[1], path);
        r.x = parse_double(cells[2], path);
        r.y = parse_double(cells[3], path);
        if (r.i < 0 || r.j < 0) throw io_error("negative grid index in " + path.string());
        max_i = std::max(max_i, r.i);
        max_j = std::max(max_j, r.j);
        rows.push_back(r);
    }
    if (max_i < 1 || max_j < 1) throw io_error("grid too small in " + path.string());
    WinslowGrid g;
    g.nx = static_cast<int>(max_i + 1);
    g.ny = static_cast<int>(max_j + 1);
    const std::size_t total = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
    if (rows.size() != total)
        throw io_error("grid rows do not fill nx*ny in " + path.string());
    g.x.assign(total, 0.0);
    g.y.assign(total, 0.0);
    std::vector<char> seen(total, 0);
    for (const auto& r : rows) {
        const std::size_t k = g.idx(static_cast<int>(r.i), static_cast<int>(r.j));
        if (seen[k]) throw io_error("duplicate grid node in " + path.string());
        seen[k] = 1;
        g.x[k] = r.x;
        g.y[k] = r.y;
    }
    return g;
}

void write_solve_report_json(const std::filesystem::path& path, const SolveReport& report) {
    json j;
    j["iterations"] = report.iterations;
    j["initial_residual"] = report.initial_residual;
    j["final_update"] = report.final_update;
    j["converged"] = report.converged;
    j["bbox_violations"] = report.bbox_violations;
    json folds = json::array();
    for (const auto& [i, k] : report.fold_cells) folds.push_back({i, k});
    j["fold_cells"] = std::move(folds);
    j["update_history"] = report.update_history;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

void write_validation_csv(const std::filesystem::path& path, const ValidationReport& report) {
    auto out = open_out(path);
    out << "beta,set,curve,expected_limit,measured_limit,limit_tol,expected_order,"
           "measured_order,order_tol,fit_residual,remainder_expected,remainder_measured,pass\n";
    for (const auto& r : report.rows)
        out << format_g17(r.beta) << ',' << r.set_index << ',' << r.curve << ','
            << format_g17(r.expected_limit) << ',' << format_g17(r.measured_limit) << ','
            << format_g17(r.limit_tol) << ',' << format_g17(r.expected_order) << ','
            << format_g17(r.measured_order) << ',' << format_g17(r.order_tol) << ','
            << format_g17(r.fit_residual) << ',' << format_g17(r.remainder_expected) << ','
            << format_g17(r.remainder_measured) << ',' << (r.pass ? 1 : 0) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

} // namespace cornermap
