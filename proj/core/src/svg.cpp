#include "cornermap/svg.hpp"

#include "cornermap/errors.hpp"

#include <array>
#include <cstdio>
#include <fstream>

namespace cornermap {

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

} // namespace

SvgPlot::SvgPlot(int width_px, int height_px, double xmin, double xmax, double ymin, double ymax,
                 int margin_px)
    : w_(width_px), h_(height_px), margin_(margin_px), xmin_(xmin), xmax_(xmax), ymin_(ymin),
      ymax_(ymax) {
    if (w_ <= 2 * margin_ || h_ <= 2 * margin_ || !(xmax_ > xmin_) || !(ymax_ > ymin_))
        throw validation_error("SvgPlot: empty canvas or viewport");
}

double SvgPlot::tx(double x) const {
    return margin_ + (x - xmin_) / (xmax_ - xmin_) * (w_ - 2 * margin_);
}

double SvgPlot::ty(double y) const {
    return h_ - margin_ - (y - ymin_) / (ymax_ - ymin_) * (h_ - 2 * margin_);
}

void SvgPlot::polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke,
                       double width, const std::string& dasharray) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt6(width) +
             "\"";
    if (!dasharray.empty()) body_ += " stroke-dasharray=\"" + dasharray + "\"";
    body_ += " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) body_ += ' ';
        body_ += fmt6(tx(pts[i].real())) + ',' + fmt6(ty(pts[i].imag()));
    }
    body_ += "\"/>\n";
}

void SvgPlot::segment(double x0, double y0, double x1, double y1, const std::string& stroke,
                      double width, const std::string& dasharray) {
    body_ += "<line x1=\"" + fmt6(tx(x0)) + "\" y1=\"" + fmt6(ty(y0)) + "\" x2=\"" +
             fmt6(tx(x1)) + "\" y2=\"" + fmt6(ty(y1)) + "\" stroke=\"" + stroke +
             "\" stroke-width=\"" + fmt6(width) + "\"";
    if (!dasharray.empty()) body_ += " stroke-dasharray=\"" + dasharray + "\"";
    body_ += "/>\n";
}

void SvgPlot::marker(double x, double y, double radius_px, const std::string& fill) {
    body_ += "<circle cx=\"" + fmt6(tx(x)) + "\" cy=\"" + fmt6(ty(y)) + "\" r=\"" +
             fmt6(radius_px) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgPlot::quad(const std::complex<double>& p0, const std::complex<double>& p1,
                   const std::complex<double>& p2, const std::complex<double>& p3,
                   const std::string& fill, double opacity) {
    body_ += "<polygon fill=\"" + fill + "\" fill-opacity=\"" + fmt6(opacity) + "\" points=\"";
    for (const auto* p : {&p0, &p1, &p2, &p3}) {
        if (p != &p0) body_ += ' ';
        body_ += fmt6(tx(p->real())) + ',' + fmt6(ty(p->imag()));
    }
    body_ += "\"/>\n";
}

void SvgPlot::text(double x, double y, const std::string& s, int font_px,
                   const std::string& fill) {
    body_ += "<text x=\"" + fmt6(tx(x)) + "\" y=\"" + fmt6(ty(y)) + "\" font-family=\"monospace\""
             " font-size=\"" + std::to_string(font_px) + "\" fill=\"" + fill + "\">" +
             escape_xml(s) + "</text>\n";
}

void SvgPlot::frame_with_ticks(int n_ticks) {
    const double x0 = tx(xmin_), x1 = tx(xmax_);
    const double y0 = ty(ymin_), y1 = ty(ymax_);
    body_ += "<rect x=\"" + fmt6(x0) + "\" y=\"" + fmt6(y1) + "\" width=\"" + fmt6(x1 - x0) +
             "\" height=\"" + fmt6(y0 - y1) + "\" fill=\"none\" stroke=\"#000000\""
             " stroke-width=\"1\"/>\n";
    for (int k = 0; k < n_ticks; ++k) {
        const double fx = xmin_ + (xmax_ - xmin_) * k / (n_ticks - 1);
        const double fy = ymin_ + (ymax_ - ymin_) * k / (n_ticks - 1);
        body_ += "<line x1=\"" + fmt6(tx(fx)) + "\" y1=\"" + fmt6(y0) + "\" x2=\"" + fmt6(tx(fx)) +
                 "\" y2=\"" + fmt6(y0 + 5) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        body_ += "<text x=\"" + fmt6(tx(fx) - 12) + "\" y=\"" + fmt6(y0 + 18) +
                 "\" font-family=\"monospace\" font-size=\"10\" fill=\"#000000\">" +
                 escape_xml(fmt6(fx)) + "</text>\n";
        body_ += "<line x1=\"" + fmt6(x0) + "\" y1=\"" + fmt6(ty(fy)) + "\" x2=\"" +
                 fmt6(x0 - 5) + "\" y2=\"" + fmt6(ty(fy)) + "\" stroke=\"#000000\""
                 " stroke-width=\"1\"/>\n";
        body_ += "<text x=\"" + fmt6(x0 - 44) + "\" y=\"" + fmt6(ty(fy) + 4) +
                 "\" font-family=\"monospace\" font-size=\"10\" fill=\"#000000\">" +
                 escape_xml(fmt6(fy)) + "</text>\n";
    }
}

std::string SvgPlot::str() const {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) +
           "\" height=\"" + std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + ' ' +
           std::to_string(h_) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(w_) + "\" height=\"" +
           std::to_string(h_) + "\" fill=\"#ffffff\"/>\n";
    out += body_;
    out += "</svg>\n";
    return out;
}

const std::string& palette_color(std::size_t index) {
    static const std::array<std::string, 8> palette = {
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[index % palette.size()];
}

void write_svg(const std::filesystem::path& path, const SvgPlot& plot) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << plot.str();
    if (!out) throw io_error("write failed: " + path.string());
}

} // namespace cornermap
