#include "dvpp/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dvpp/trace_io.hpp"

namespace dvpp {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kMaxPoints = 2000;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg_plot(const std::string& title, const std::string& y_label, const std::vector<PlotSeries>& series) {
    const double width = 900, height = 420, left = 90, right = 170, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y0 -= 1e-6, y1 += 1e-6;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
                      "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) + "</text>\n";
    svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
        svg += "<line x1=\"" + fmt(sx(xv)) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(sx(xv)) + "\" y2=\"" + fmt(top + ph) +
               "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt(sx(xv)) + "\" y=\"" + fmt(top + ph + 16) + "\" text-anchor=\"middle\">" + fmt(xv) + "</text>\n";
        svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(sy(yv)) + "\" x2=\"" + fmt(left + pw) + "\" y2=\"" + fmt(sy(yv)) +
               "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(sy(yv) + 4) + "\" text-anchor=\"end\">" + fmt(yv) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(height - 10) + "\" text-anchor=\"middle\">t [s]</text>\n";
    svg += "<text transform=\"translate(16," + fmt(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           escape(y_label) + "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / kMaxPoints);
        std::string pts;
        for (std::size_t k = 0; k < s.x.size(); k += stride) pts += fmt(sx(s.x[k])) + "," + fmt(sy(s.y[k])) + " ";
        if (!s.x.empty()) pts += fmt(sx(s.x.back())) + "," + fmt(sy(s.y.back()));
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.4\"" +
               (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(i);
        svg += "<line x1=\"" + fmt(left + pw + 10) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(left + pw + 34) + "\" y2=\"" +
               fmt(ly) + "\" stroke=\"" + color + "\"" + (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
        svg += "<text x=\"" + fmt(left + pw + 40) + "\" y=\"" + fmt(ly + 4) + "\">" + escape(s.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<std::filesystem::path> write_figure_panels(const SimulationTrace& trace, const Metrics& metrics,
                                                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto t = trace.column("t");
    const auto& ids = trace.header().nodes;
    auto node_series = [&](const std::string& signal, const std::string& label_suffix, bool dashed, bool dvpp_only) {
        std::vector<PlotSeries> out;
        const auto& kinds = trace.header().node_kinds;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const NodeId id = ids[i];
            if (dvpp_only && i < kinds.size() && kinds[i] != NodeKind::Dvpp) continue;
            out.push_back({"node " + std::to_string(id) + label_suffix, t, trace.column(node_column(id, signal)), dashed});
        }
        return out;
    };
    auto concat = [](std::vector<PlotSeries> a, std::vector<PlotSeries> b) {
        a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
        return a;
    };

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& file, const std::string& title, const std::string& ylabel,
                    const std::vector<PlotSeries>& s) {
        const auto path = dir / file;
        write_text_file(path, render_svg_plot(title, ylabel, s));
        written.push_back(path);
    };
    emit("frequency.svg", "Frequency deviation: measured vs estimated", "omega [p.u.]",
         concat(node_series("omega", "", false, false), node_series("omega_hat", " est.", true, true)));
    emit("unmeasured_power.svg", "Unmeasured power: true vs estimated", "P [p.u.]",
         concat(node_series("p_unmeas", "", false, true), node_series("p_unmeas_hat", " est.", true, true)));
    emit("bess_power.svg", "BESS power: required vs measured", "P [p.u.]",
         concat(node_series("u_star", " u*", false, true), node_series("u_m", " u_m", true, true)));
    emit("tie_line.svg", "Net tie-line power injection", "P [p.u.]", node_series("tie", "", false, false));
    emit("mean_frequency.svg", "Average grid frequency", "omega [p.u.]", {{"mean", t, metrics.mean_omega, false}});
    return written;
}

}  // namespace dvpp
