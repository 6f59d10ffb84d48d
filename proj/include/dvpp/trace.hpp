#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dvpp/estimator.hpp"
#include "dvpp/grid_model.hpp"

namespace dvpp {

// Per-node signals recorded every step, in column order.
inline constexpr const char* kNodeSignals[] = {
    "theta", "omega", "omega_hat", "p_unmeas", "p_unmeas_hat", "p_e", "p_res", "p_fcr",
    "u_star", "u_m", "u_delta", "delta_d", "tie", "p_m", "h", "rocof",
};

std::string node_column(NodeId node, const std::string& signal);

struct NodeCertification {
    NodeId node = 0;
    double inertia = 0.0;  // inertia the estimator is built with
    EstimatorGains eigen;
    LyapunovCertificate lyapunov;
};

struct TraceHeader {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string rng_algorithm;
    double dt = 0.0;
    std::size_t decimation = 1;
    std::string config_hash;
    std::vector<NodeId> nodes;
    std::vector<NodeKind> node_kinds;
    std::vector<NodeCertification> certification;
};

// Row-major table of named columns on a uniform time grid.
class SimulationTrace {
public:
    SimulationTrace() = default;
    SimulationTrace(TraceHeader header, std::vector<std::string> columns);

    TraceHeader& header() noexcept { return header_; }
    const TraceHeader& header() const noexcept { return header_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }

    std::size_t rows() const noexcept { return columns_.empty() ? 0 : values_.size() / columns_.size(); }
    std::size_t column_index(const std::string& name) const;  // throws LookupError
    bool has_column(const std::string& name) const;

    double at(std::size_t row, std::size_t col) const { return values_[row * columns_.size() + col]; }
    double at(std::size_t row, const std::string& name) const { return at(row, column_index(name)); }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * columns_.size(), columns_.size()};
    }
    std::vector<double> column(const std::string& name) const;

    void append_row(std::span<const double> values);
    void reserve_rows(std::size_t n) { values_.reserve(n * columns_.size()); }
    const std::vector<double>& values() const noexcept { return values_; }

    // Every `factor`-th row starting at row 0.
    SimulationTrace decimated(std::size_t factor) const;

private:
    TraceHeader header_;
    std::vector<std::string> columns_;
    std::vector<double> values_;
};

}  // namespace dvpp
