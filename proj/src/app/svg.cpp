#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dimers::svg {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string rgb(double r, double g, double b) {
    auto to = [](double v) { return static_cast<int>(std::lround(255.0 * std::clamp(v, 0.0, 1.0))); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", to(r), to(g), to(b));
    return buf;
}

std::string diverging(double t) {
    t = std::clamp(t, -1.0, 1.0);
    if (t < 0) return rgb(1.0 + t, 1.0 + t, 1.0);
    return rgb(1.0, 1.0 - t, 1.0 - t);
}

std::string line_plot(const std::string& title, const std::vector<Series>& series, const std::string& xlabel,
                      const std::string& ylabel) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) xmin -= 1, xmax += 1;
    if (!(ymax > ymin)) ymin -= 1, ymax += 1;
    const double size = 560, pad = 40;
    const double scale = size / std::max(xmax - xmin, ymax - ymin);
    const double ox = pad + 0.5 * (size - scale * (xmax - xmin)), oy = pad + 0.5 * (size - scale * (ymax - ymin));
    auto X = [&](double x) { return ox + scale * (x - xmin); };
    auto Y = [&](double y) { return oy + scale * (ymax - y); };

    std::ostringstream o;
    const double total = size + 2 * pad;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
      << "\" viewBox=\"0 0 " << total << ' ' << total << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n";
    o << "<text x=\"" << total / 2 << "\" y=\"" << total - 8 << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(xlabel) << "</text>\n";
    o << "<text x=\"12\" y=\"" << total / 2 << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(ylabel)
      << "</text>\n";
    o << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (const auto& s : series) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        bool first = true;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            o << (first ? "" : " ") << num(X(x)) << ',' << num(Y(y));
            first = false;
        }
        o << "\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string cell_map(const std::string& title, int rows, int cols, const std::vector<std::string>& colors) {
    const double cell = std::max(1.0, std::min(8.0, 640.0 / std::max(rows, cols)));
    const double pad = 30;
    std::ostringstream o;
    const double w = cols * cell + 2 * pad, h = rows * cell + 2 * pad;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\" shape-rendering=\"crispEdges\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n";
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            o << "<rect x=\"" << num(pad + c * cell) << "\" y=\"" << num(pad + r * cell) << "\" width=\"" << num(cell)
              << "\" height=\"" << num(cell) << "\" fill=\"" << colors[static_cast<size_t>(r * cols + c)] << "\"/>\n";
    o << "</svg>\n";
    return o.str();
}

}  // namespace dimers::svg
