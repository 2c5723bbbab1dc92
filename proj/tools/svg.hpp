#pragma once

#include <string>
#include <utility>
#include <vector>

namespace inls::tools {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    int width = 720;
    int height = 460;
};

/// Line chart as a standalone SVG document. Non-finite points (and
/// non-positive ones on log axes) are skipped.
std::string line_chart(const std::vector<Series>& series, const PlotOptions& opt);

struct Polygon {
    std::vector<std::pair<double, double>> points;
    std::string stroke;
    std::string fill;
    std::string label;
};

/// Polygons plus an optional shaded scalar field on a regular grid
/// (values in [0, 1], row-major, ny rows of nx values spanning the box).
struct RegionPlot {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    std::vector<Polygon> polygons;
    int nx = 0, ny = 0;
    std::vector<double> shade;
    std::string title;
};

std::string region_chart(const RegionPlot& plot, int width = 720, int height = 520);

/// CSV with a header row; returns column names and the numeric columns.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(const std::string& path);

}  // namespace inls::tools
