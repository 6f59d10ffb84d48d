#include "dvpp/grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "dvpp/errors.hpp"

namespace dvpp {

std::string to_string(NodeKind kind) {
    return kind == NodeKind::Dvpp ? "dvpp" : "sg";
}

std::vector<std::string> validate(const NodeParams& p) {
    std::vector<std::string> out;
    const std::string where = "node " + std::to_string(p.id) + ": ";
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) out.push_back(where + msg);
    };
    require(std::isfinite(p.inertia) && p.inertia > 0.0, "inertia H must be positive");
    if (p.kind == NodeKind::Dvpp) {
        require(std::isfinite(p.bess_tau) && p.bess_tau > 0.0, "bess_tau must be positive");
        require(std::isfinite(p.bess_min) && p.bess_min < 0.0, "bess_min must be negative");
        require(std::isfinite(p.bess_max) && p.bess_max > 0.0, "bess_max must be positive");
        require(std::isfinite(p.fcr_pmax) && p.fcr_pmax >= 0.0, "fcr_pmax must be non-negative");
        require(std::isfinite(p.beta) && p.beta > 0.0, "beta must be positive");
        require(std::isfinite(p.alpha) && p.alpha > 0.0, "alpha must be positive");
        require(std::isfinite(p.estimator_inertia_scale) && p.estimator_inertia_scale > 0.0,
                "estimator_inertia_scale must be positive");
    } else {
        require(std::isfinite(p.r_ibr) && p.r_ibr > 0.0, "r_ibr must be positive");
        require(std::isfinite(p.r_sg) && p.r_sg > 0.0, "r_sg must be positive");
        require(std::isfinite(p.governor_tau) && p.governor_tau > 0.0, "governor_tau must be positive");
        require(std::isfinite(p.inertia_after_trip) && p.inertia_after_trip > 0.0,
                "inertia_after_trip must be positive");
    }
    return out;
}

GridTopology::GridTopology(std::vector<NodeId> node_ids, std::vector<ElectricalEdge> electrical,
                           std::vector<CommEdge> comm, double comm_delay)
    : node_ids_(std::move(node_ids)), comm_delay_(comm_delay) {
    {
        std::set<NodeId> seen;
        for (NodeId id : node_ids_) {
            if (!seen.insert(id).second) throw ParameterError("duplicate node id " + std::to_string(id));
        }
    }
    if (!std::isfinite(comm_delay) || comm_delay < 0.0)
        throw ParameterError("communication delay must be non-negative");

    elec_adj_.resize(node_ids_.size());
    comm_adj_.resize(node_ids_.size());

    std::set<std::pair<NodeId, NodeId>> elec_seen;
    for (auto e : electrical) {
        if (!contains(e.from) || !contains(e.to))
            throw LookupError("electrical edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                              ") references an undeclared node");
        if (e.from == e.to) throw ParameterError("self-loop on node " + std::to_string(e.from));
        if (!std::isfinite(e.reactance) || e.reactance <= 0.0)
            throw ParameterError("reactance must be positive on edge (" + std::to_string(e.from) + "," +
                                 std::to_string(e.to) + ")");
        if (e.from > e.to) std::swap(e.from, e.to);
        if (!elec_seen.insert({e.from, e.to}).second)
            throw ParameterError("duplicate electrical edge (" + std::to_string(e.from) + "," +
                                 std::to_string(e.to) + ")");
        electrical_.push_back(e);
        const auto i = index_of(e.from), j = index_of(e.to);
        elec_adj_[i].push_back({j, e.reactance});
        elec_adj_[j].push_back({i, e.reactance});
    }

    std::set<std::pair<NodeId, NodeId>> comm_seen;
    for (auto e : comm) {
        if (!contains(e.from) || !contains(e.to))
            throw LookupError("communication edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                              ") references an undeclared node");
        if (e.from == e.to) throw ParameterError("self-loop on node " + std::to_string(e.from));
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw ParameterError("communication weight must be non-negative");
        if (e.from > e.to) std::swap(e.from, e.to);
        if (!comm_seen.insert({e.from, e.to}).second)
            throw ParameterError("duplicate communication edge (" + std::to_string(e.from) + "," +
                                 std::to_string(e.to) + ")");
        comm_.push_back(e);
        const auto i = index_of(e.from), j = index_of(e.to);
        comm_adj_[i].push_back({j, e.weight});
        comm_adj_[j].push_back({i, e.weight});
    }
}

std::size_t GridTopology::index_of(NodeId id) const {
    auto it = std::find(node_ids_.begin(), node_ids_.end(), id);
    if (it == node_ids_.end()) throw LookupError("unknown node id " + std::to_string(id));
    return static_cast<std::size_t>(it - node_ids_.begin());
}

bool GridTopology::contains(NodeId id) const noexcept {
    return std::find(node_ids_.begin(), node_ids_.end(), id) != node_ids_.end();
}

std::optional<double> GridTopology::reactance(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : electrical_)
        if (e.from == a && e.to == b) return e.reactance;
    return std::nullopt;
}

double GridTopology::comm_weight(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : comm_)
        if (e.from == a && e.to == b) return e.weight;
    return 0.0;
}

double tie_line_flow(double theta_i, double theta_j, double reactance) {
    if (!std::isfinite(theta_i) || !std::isfinite(theta_j) || !std::isfinite(reactance))
        throw ParameterError("tie_line_flow: non-finite input");
    if (reactance <= 0.0) throw ParameterError("tie_line_flow: reactance must be positive");
    return std::sin(theta_i - theta_j) / reactance;
}

double net_tie_line_injection(NodeId node, std::span<const double> theta, const GridTopology& topology) {
    const auto i = topology.index_of(node);
    if (theta.size() != topology.size()) throw ParameterError("phase vector size does not match topology");
    double sum = 0.0;
    for (const auto& nb : topology.electrical_neighbors(i)) sum += tie_line_flow(theta[i], theta[nb.index], nb.value);
    return sum;
}

std::vector<double> net_tie_line_injections(std::span<const double> theta, const GridTopology& topology) {
    if (theta.size() != topology.size()) throw ParameterError("phase vector size does not match topology");
    std::vector<double> out(topology.size(), 0.0);
    for (std::size_t i = 0; i < topology.size(); ++i)
        for (const auto& nb : topology.electrical_neighbors(i))
            out[i] += tie_line_flow(theta[i], theta[nb.index], nb.value);
    return out;
}

}  // namespace dvpp
