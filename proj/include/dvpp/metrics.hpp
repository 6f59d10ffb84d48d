#pragma once

#include <vector>

#include "dvpp/trace.hpp"

namespace dvpp {

struct MetricsOptions {
    double window_start = 0.0;
    double window_end = -1.0;  // negative: end of trace
    bool inertia_weighted = false;
    double settle_band = 1e-4;  // |omega| band used for settling times, p.u.
};

struct NodeSummary {
    NodeId node = 0;
    double omega = 0, omega_hat = 0, p_unmeas = 0, p_unmeas_hat = 0;
    double u_star = 0, u_m = 0, u_delta = 0, tie = 0, p_m = 0;
    double settling_time = 0;  // last time |omega| left the settle band (0 if never)
};

struct Metrics {
    std::vector<double> mean_omega;
    std::vector<double> mean_rocof;             // forward difference of mean_omega
    std::vector<std::vector<double>> rocof;     // per node, forward difference of omega
    double window_start = 0.0;
    double window_end = 0.0;
    double rms_mean_rocof = 0.0;                // over the window
    std::vector<NodeSummary> nodes;             // values at the last row
};

// Forward difference; the last sample reuses the backward difference.
std::vector<double> forward_difference(const std::vector<double>& values, const std::vector<double>& time);

Metrics derived_metrics(const SimulationTrace& trace, const MetricsOptions& options = {});

}  // namespace dvpp
