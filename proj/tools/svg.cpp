#include "svg.hpp"

#include "inls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace inls::tools {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

struct Axis {
    double lo, hi;
    bool log;
    double map(double v, double a, double b) const {
        const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return a + t * (b - a);
    }
};

Axis make_axis(const std::vector<double>& v, bool log) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : v) {
        if (!std::isfinite(x) || (log && x <= 0)) continue;
        const double t = log ? std::log10(x) : x;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.04 * (hi - lo);
    return {lo - pad, hi + pad, log};
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const PlotOptions& opt) {
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Axis ax = make_axis(xs, opt.logx), ay = make_axis(ys, opt.logy);
    const double L = 80, R = opt.width - 20, T = 40, B = opt.height - 60;

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(opt.title)
      << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << R - L << "\" height=\"" << B - T
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tx = ax.lo + (ax.hi - ax.lo) * i / 5.0, ty = ay.lo + (ay.hi - ay.lo) * i / 5.0;
        const double px = L + (R - L) * i / 5.0, py = B - (B - T) * i / 5.0;
        o << "<line x1=\"" << px << "\" y1=\"" << B << "\" x2=\"" << px << "\" y2=\"" << B + 5 << "\" stroke=\"#444\"/>";
        o << "<text x=\"" << px << "\" y=\"" << B + 18 << "\" text-anchor=\"middle\">"
          << fmt(ax.log ? std::pow(10.0, tx) : tx) << "</text>\n";
        o << "<line x1=\"" << L - 5 << "\" y1=\"" << py << "\" x2=\"" << L << "\" y2=\"" << py << "\" stroke=\"#444\"/>";
        o << "<text x=\"" << L - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
          << fmt(ay.log ? std::pow(10.0, ty) : ty) << "</text>\n";
    }
    o << "<text x=\"" << (L + R) / 2 << "\" y=\"" << opt.height - 18 << "\" text-anchor=\"middle\">"
      << esc(opt.xlabel) << "</text>\n";
    o << "<text transform=\"translate(18," << (T + B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << esc(opt.ylabel) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* col = kPalette[s % 8];
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t k = 0; k < series[s].x.size() && k < series[s].y.size(); ++k) {
            const double x = series[s].x[k], y = series[s].y[k];
            if (!std::isfinite(x) || !std::isfinite(y) || (opt.logx && x <= 0) || (opt.logy && y <= 0)) continue;
            o << ax.map(x, L, R) << "," << ay.map(y, B, T) << " ";
        }
        o << "\"/>\n";
        const double ly = T + 16 + 16.0 * s;
        o << "<line x1=\"" << R - 150 << "\" y1=\"" << ly << "\" x2=\"" << R - 130 << "\" y2=\"" << ly
          << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>";
        o << "<text x=\"" << R - 125 << "\" y=\"" << ly + 4 << "\">" << esc(series[s].name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string region_chart(const RegionPlot& p, int width, int height) {
    const double L = 40, R = width - 20, T = 40, B = height - 40;
    const double sx = (R - L) / (p.xmax - p.xmin), sy = (B - T) / (p.ymax - p.ymin);
    const double s = std::min(sx, sy);
    auto X = [&](double x) { return L + (x - p.xmin) * s; };
    auto Y = [&](double y) { return B - (y - p.ymin) * s; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(p.title)
      << "</text>\n";
    if (p.nx > 0 && p.ny > 0 && p.shade.size() == static_cast<std::size_t>(p.nx) * p.ny) {
        const double cw = (p.xmax - p.xmin) / p.nx, ch = (p.ymax - p.ymin) / p.ny;
        for (int i = 0; i < p.ny; ++i)
            for (int j = 0; j < p.nx; ++j) {
                const double v = std::clamp(p.shade[static_cast<std::size_t>(i) * p.nx + j], 0.0, 1.0);
                if (v <= 0.0) continue;
                const int g = static_cast<int>(std::lround(255 - 120 * v));
                o << "<rect x=\"" << X(p.xmin + j * cw) << "\" y=\"" << Y(p.ymin + (i + 1) * ch) << "\" width=\""
                  << cw * s + 0.5 << "\" height=\"" << ch * s + 0.5 << "\" fill=\"rgb(" << g << "," << g << ",255)\"/>";
            }
        o << "\n";
    }
    for (std::size_t k = 0; k < p.polygons.size(); ++k) {
        const Polygon& poly = p.polygons[k];
        o << "<polygon fill=\"" << (poly.fill.empty() ? "none" : poly.fill) << "\" stroke=\""
          << (poly.stroke.empty() ? "black" : poly.stroke) << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : poly.points) o << X(x) << "," << Y(y) << " ";
        o << "\"/>\n";
        if (!poly.label.empty() && !poly.points.empty()) {
            double cx = 0, cy = 0;
            for (const auto& [x, y] : poly.points) cx += x, cy += y;
            cx /= poly.points.size();
            cy /= poly.points.size();
            o << "<text x=\"" << X(cx) << "\" y=\"" << Y(cy) << "\" text-anchor=\"middle\">" << esc(poly.label)
              << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + " is empty");
    std::vector<std::string> names;
    {
        std::istringstream is(line);
        std::string cell;
        while (std::getline(is, cell, ',')) names.push_back(cell);
    }
    std::vector<std::vector<double>> cols(names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string cell;
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (!std::getline(is, cell, ',')) cell.clear();
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            cols[c].push_back(end != cell.c_str() ? v : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return {names, cols};
}

}  // namespace inls::tools
