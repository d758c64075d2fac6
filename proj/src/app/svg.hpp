#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dimers::svg {

using Polyline = std::vector<std::pair<double, double>>;

struct Series {
    Polyline points;
    std::string color;
};

// Line plot of several polylines in a shared, aspect-preserving frame.
std::string line_plot(const std::string& title, const std::vector<Series>& series, const std::string& xlabel,
                      const std::string& ylabel);

// One rectangle per cell; colors are given per cell as "#rrggbb".
std::string cell_map(const std::string& title, int rows, int cols, const std::vector<std::string>& colors);

std::string rgb(double r, double g, double b);  // components in [0,1]
std::string diverging(double t);                // t in [-1,1] to blue-white-red

}  // namespace dimers::svg
