#include "blosim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "blosim/errors.hpp"

namespace blosim {

namespace {
constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 50.0;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}
} // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        for (const double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
        for (const double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
    }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    if (!(y_max > y_min)) { y_min -= 1.0; y_max += 1.0; }
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    auto px = [&](double x) { return kMarginL + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kMarginT + (y_max - y) / (y_max - y_min) * plot_h; };

    std::ofstream out(path);
    if (!out) throw io_error("cannot open SVG for writing: " + path.string());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";

    // Frame and ticks
    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 5.0;
        const double fy = y_min + (y_max - y_min) * i / 5.0;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << kMarginT + plot_h << "\" x2=\"" << px(fx)
            << "\" y2=\"" << kMarginT + plot_h + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << kMarginT + plot_h + 20
            << "\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
        out << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << kMarginL
            << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    out << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << kMarginT + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kMarginT + plot_h / 2
        << ")\">" << y_label << "</text>\n";

    double legend_y = kMarginT + 16;
    for (const auto& s : series) {
        if (s.x.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        // Cap point count so files stay small.
        const std::size_t step = std::max<std::size_t>(1, s.x.size() / 4000);
        for (std::size_t i = 0; i < s.x.size(); i += step)
            out << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
        out << "\"/>\n";
        out << "<line x1=\"" << kMarginL + plot_w - 150 << "\" y1=\"" << legend_y << "\" x2=\""
            << kMarginL + plot_w - 120 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kMarginL + plot_w - 114 << "\" y=\"" << legend_y + 4 << "\">"
            << s.label << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
    if (!out) throw io_error("failed writing SVG: " + path.string());
}

} // namespace blosim
