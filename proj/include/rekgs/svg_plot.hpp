#ifndef REKGS_SVG_PLOT_HPP
#define REKGS_SVG_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace rekgs {

struct PlotSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
    bool dashed = false;
};

/// Maps a value onto a log10 axis spanning [vmin, vmax] -> [y_bottom, y_top]
/// (SVG y grows downward, so y_bottom > y_top). Values at or below vmin pin
/// to y_bottom.
double map_log_y(double value, double vmin, double vmax, double y_top,
                 double y_bottom);

/// Writes a self-contained semilog-y SVG line chart. Each series becomes one
/// <polyline class="curve">; axes, decade ticks and a legend are emitted
/// around it. No external tools involved.
void write_semilogy_svg(const std::filesystem::path& path,
                        const std::vector<PlotSeries>& series,
                        const std::string& title, const std::string& x_label,
                        const std::string& y_label);

}  // namespace rekgs

#endif  // REKGS_SVG_PLOT_HPP
