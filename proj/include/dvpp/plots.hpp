#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dvpp/metrics.hpp"
#include "dvpp/trace.hpp"

namespace dvpp {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

// Static line chart as a standalone SVG document.
std::string render_svg_plot(const std::string& title, const std::string& y_label, const std::vector<PlotSeries>& series);

// Writes frequency.svg, unmeasured_power.svg, bess_power.svg, tie_line.svg and mean_frequency.svg
// into `dir`; returns the written paths.
std::vector<std::filesystem::path> write_figure_panels(const SimulationTrace& trace, const Metrics& metrics,
                                                       const std::filesystem::path& dir);

}  // namespace dvpp
