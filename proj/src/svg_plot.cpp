#include "rekgs/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rekgs {

double map_log_y(double value, double vmin, double vmax, double y_top,
                 double y_bottom) {
    if (!(vmax > vmin) || !(vmin > 0.0)) {
        throw std::invalid_argument("map_log_y: need 0 < vmin < vmax");
    }
    if (!(value > vmin)) return y_bottom;
    if (value >= vmax) return y_top;
    const double t = (std::log10(value) - std::log10(vmin)) /
                     (std::log10(vmax) - std::log10(vmin));
    return y_bottom + t * (y_top - y_bottom);
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

std::string fmt_pow10(int e) {
    std::ostringstream os;
    os << "1e" << e;
    return os.str();
}

}  // namespace

void write_semilogy_svg(const std::filesystem::path& path,
                        const std::vector<PlotSeries>& series,
                        const std::string& title, const std::string& x_label,
                        const std::string& y_label) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        for (const double x : s.xs) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
        for (const double y : s.ys) {
            if (y > 0.0) {
                vmin = std::min(vmin, y);
                vmax = std::max(vmax, y);
            }
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (!std::isfinite(vmin)) {
        // no positive values at all; any positive window works
        vmin = 0.1;
        vmax = 1.0;
    }
    // Pad to whole decades.
    int e_lo = static_cast<int>(std::floor(std::log10(vmin)));
    int e_hi = static_cast<int>(std::ceil(std::log10(vmax)));
    if (e_hi <= e_lo) e_hi = e_lo + 1;
    vmin = std::pow(10.0, e_lo);
    vmax = std::pow(10.0, e_hi);

    const double px0 = kLeft;
    const double px1 = kWidth - kRight;
    const double py_top = kTop;
    const double py_bot = kHeight - kBottom;
    auto map_x = [&](double x) {
        return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0);
    };
    auto map_y = [&](double v) { return map_log_y(v, vmin, vmax, py_top, py_bot); };

    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("write_semilogy_svg: cannot open " + path.string());
    }
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
       << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"22\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    // axes
    os << "<line class=\"axis\" x1=\"" << fmt(px0) << "\" y1=\"" << fmt(py_bot)
       << "\" x2=\"" << fmt(px1) << "\" y2=\"" << fmt(py_bot)
       << "\" stroke=\"black\"/>\n";
    os << "<line class=\"axis\" x1=\"" << fmt(px0) << "\" y1=\"" << fmt(py_top)
       << "\" x2=\"" << fmt(px0) << "\" y2=\"" << fmt(py_bot)
       << "\" stroke=\"black\"/>\n";

    // y ticks at decades (at most ~12 labels)
    const int estep = std::max(1, (e_hi - e_lo + 11) / 12);
    for (int e = e_lo; e <= e_hi; e += estep) {
        const double y = map_y(std::pow(10.0, e));
        os << "<line class=\"tick\" x1=\"" << fmt(px0 - 4) << "\" y1=\"" << fmt(y)
           << "\" x2=\"" << fmt(px0) << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(px0 - 8) << "\" y=\"" << fmt(y + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt_pow10(e) << "</text>\n";
    }
    // x ticks: 5 evenly spaced
    for (int t = 0; t <= 4; ++t) {
        const double x = xmin + (xmax - xmin) * t / 4.0;
        const double px = map_x(x);
        os << "<line class=\"tick\" x1=\"" << fmt(px) << "\" y1=\"" << fmt(py_bot)
           << "\" x2=\"" << fmt(px) << "\" y2=\"" << fmt(py_bot + 4)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(py_bot + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << static_cast<long long>(std::llround(x)) << "</text>\n";
    }
    os << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"" << fmt(kHeight - 12)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << fmt((py_top + py_bot) / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
          "transform=\"rotate(-90 18 " << fmt((py_top + py_bot) / 2) << ")\">"
       << y_label << "</text>\n";

    // curves
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& sr = series[s];
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"";
        if (sr.dashed) os << " stroke-dasharray=\"6 3\"";
        os << " points=\"";
        for (std::size_t i = 0; i < sr.xs.size(); ++i) {
            if (i) os << ' ';
            os << fmt(map_x(sr.xs[i])) << ',' << fmt(map_y(sr.ys[i]));
        }
        os << "\"/>\n";
    }

    // legend
    const double lx = px1 + 14.0;
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double ly = py_top + 10.0 + 18.0 * static_cast<double>(s);
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << "<line class=\"legend\" x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly)
           << "\" x2=\"" << fmt(lx + 22) << "\" y2=\"" << fmt(ly) << "\" stroke=\""
           << color << "\" stroke-width=\"1.5\"";
        if (series[s].dashed) os << " stroke-dasharray=\"6 3\"";
        os << "/>\n";
        os << "<text x=\"" << fmt(lx + 28) << "\" y=\"" << fmt(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label
           << "</text>\n";
    }
    os << "</svg>\n";
    if (!os) {
        throw std::runtime_error("write_semilogy_svg: write failed for " + path.string());
    }
}

}  // namespace rekgs
