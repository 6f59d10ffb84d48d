#include "dvpp/metrics.hpp"

#include <cmath>

#include "dvpp/errors.hpp"

namespace dvpp {

std::vector<double> forward_difference(const std::vector<double>& values, const std::vector<double>& time) {
    const std::size_t n = values.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    for (std::size_t k = 0; k + 1 < n; ++k) out[k] = (values[k + 1] - values[k]) / (time[k + 1] - time[k]);
    out[n - 1] = out[n - 2];
    return out;
}

Metrics derived_metrics(const SimulationTrace& trace, const MetricsOptions& options) {
    const std::size_t rows = trace.rows();
    if (rows == 0) throw ParameterError("derived_metrics: empty trace");
    const auto& ids = trace.header().nodes;
    if (ids.empty()) throw ParameterError("derived_metrics: trace header lists no nodes");

    const auto time = trace.column("t");
    std::vector<std::vector<double>> omega, inertia;
    for (NodeId id : ids) {
        omega.push_back(trace.column(node_column(id, "omega")));
        inertia.push_back(trace.column(node_column(id, "h")));
    }

    Metrics m;
    m.mean_omega.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const double w = options.inertia_weighted ? inertia[i][r] : 1.0;
            num += w * omega[i][r];
            den += w;
        }
        m.mean_omega[r] = num / den;
    }
    m.mean_rocof = forward_difference(m.mean_omega, time);
    for (const auto& w : omega) m.rocof.push_back(forward_difference(w, time));

    m.window_start = options.window_start;
    m.window_end = options.window_end < 0.0 ? time.back() : options.window_end;
    const double eps = 1e-9 * (rows > 1 ? time[1] - time[0] : 1.0);
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r + 1 < rows; ++r) {
        if (time[r] + eps < m.window_start || time[r + 1] > m.window_end + eps) continue;
        sum_sq += m.mean_rocof[r] * m.mean_rocof[r];
        ++count;
    }
    m.rms_mean_rocof = count ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;

    for (std::size_t i = 0; i < ids.size(); ++i) {
        const NodeId id = ids[i];
        NodeSummary s;
        s.node = id;
        const std::size_t last = rows - 1;
        s.omega = omega[i][last];
        s.omega_hat = trace.at(last, node_column(id, "omega_hat"));
        s.p_unmeas = trace.at(last, node_column(id, "p_unmeas"));
        s.p_unmeas_hat = trace.at(last, node_column(id, "p_unmeas_hat"));
        s.u_star = trace.at(last, node_column(id, "u_star"));
        s.u_m = trace.at(last, node_column(id, "u_m"));
        s.u_delta = trace.at(last, node_column(id, "u_delta"));
        s.tie = trace.at(last, node_column(id, "tie"));
        s.p_m = trace.at(last, node_column(id, "p_m"));
        for (std::size_t r = rows; r-- > 0;) {
            if (std::abs(omega[i][r]) > options.settle_band) {
                s.settling_time = r + 1 < rows ? time[r + 1] : time[r];
                break;
            }
        }
        m.nodes.push_back(s);
    }
    return m;
}

}  // namespace dvpp
