#include "dvpp/trace.hpp"

#include <algorithm>

#include "dvpp/errors.hpp"

namespace dvpp {

std::string node_column(NodeId node, const std::string& signal) {
    return "n" + std::to_string(node) + "." + signal;
}

SimulationTrace::SimulationTrace(TraceHeader header, std::vector<std::string> columns)
    : header_(std::move(header)), columns_(std::move(columns)) {}

std::size_t SimulationTrace::column_index(const std::string& name) const {
    auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) throw LookupError("trace has no column '" + name + "'");
    return static_cast<std::size_t>(it - columns_.begin());
}

bool SimulationTrace::has_column(const std::string& name) const {
    return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::vector<double> SimulationTrace::column(const std::string& name) const {
    const auto c = column_index(name);
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, c);
    return out;
}

void SimulationTrace::append_row(std::span<const double> values) {
    if (values.size() != columns_.size()) throw ParameterError("trace row width does not match column count");
    values_.insert(values_.end(), values.begin(), values.end());
}

SimulationTrace SimulationTrace::decimated(std::size_t factor) const {
    if (factor == 0) throw ParameterError("decimation factor must be at least 1");
    SimulationTrace out(header_, columns_);
    out.header_.decimation = header_.decimation * factor;
    for (std::size_t r = 0; r < rows(); r += factor) out.append_row(row(r));
    return out;
}

}  // namespace dvpp
