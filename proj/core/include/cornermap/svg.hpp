#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace cornermap {

// Minimal deterministic SVG figure builder: a fixed data-to-pixel transform,
// %.6g coordinate formatting, and explicit axes/ticks, so that identical call
// sequences produce byte-identical files.
class SvgPlot {
public:
    SvgPlot(int width_px, int height_px, double xmin, double xmax, double ymin, double ymax,
            int margin_px = 48);

    void polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke,
                  double width = 1.0, const std::string& dasharray = "");
    void segment(double x0, double y0, double x1, double y1, const std::string& stroke,
                 double width = 1.0, const std::string& dasharray = "");
    void marker(double x, double y, double radius_px, const std::string& fill);
    void quad(const std::complex<double>& p0, const std::complex<double>& p1,
              const std::complex<double>& p2, const std::complex<double>& p3,
              const std::string& fill, double opacity);
    void text(double x, double y, const std::string& s, int font_px = 12,
              const std::string& fill = "#000000");
    void frame_with_ticks(int n_ticks = 5);

    std::string str() const;

private:
    double tx(double x) const;
    double ty(double y) const;

    int w_, h_, margin_;
    double xmin_, xmax_, ymin_, ymax_;
    std::string body_;
};

// Fixed 8-color palette for multi-curve figures.
const std::string& palette_color(std::size_t index);

void write_svg(const std::filesystem::path& path, const SvgPlot& plot);

} // namespace cornermap
