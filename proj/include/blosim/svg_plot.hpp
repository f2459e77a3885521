#ifndef BLOSIM_SVG_PLOT_HPP
#define BLOSIM_SVG_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace blosim {

struct PlotSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal line plot, derived purely from already-exported curve data.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

} // namespace blosim

#endif
