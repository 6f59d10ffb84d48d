#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dvpp {

using NodeId = int;

enum class NodeKind { Dvpp, Sg };

std::string to_string(NodeKind kind);

struct ElectricalEdge {
    NodeId from;
    NodeId to;
    double reactance;  // p.u.
};

struct CommEdge {
    NodeId from;
    NodeId to;
    double weight;
};

// Static per-node parameters. Fields that do not apply to the node's kind are ignored.
struct NodeParams {
    NodeId id = 0;
    NodeKind kind = NodeKind::Dvpp;
    double inertia = 0.0;  // H, seconds

    // DVPP
    double bess_tau = 0.1;
    double bess_min = 0.0;
    double bess_max = 0.0;
    double fcr_pmax = 0.0;
    double beta = 1.0;
    double alpha = 1.0;
    double estimator_inertia_scale = 1.0;  // estimator uses H * scale

    // SG
    double r_ibr = 0.05;
    double r_sg = 0.05;
    double governor_tau = 2.0;        // T_g
    double inertia_after_trip = 0.005;

    bool operator==(const NodeParams&) const = default;
};

// Returns every invariant the parameter set violates; empty when valid.
std::vector<std::string> validate(const NodeParams& params);

// Physical (electrical) and cyber (communication) graphs over a fixed node set.
// Both graphs are undirected; edges are stored with from < to.
class GridTopology {
public:
    struct Neighbor {
        std::size_t index;
        double value;  // reactance for electrical, weight for communication
    };

    GridTopology() = default;
    GridTopology(std::vector<NodeId> node_ids, std::vector<ElectricalEdge> electrical,
                 std::vector<CommEdge> comm, double comm_delay);

    std::size_t size() const noexcept { return node_ids_.size(); }
    const std::vector<NodeId>& node_ids() const noexcept { return node_ids_; }
    const std::vector<ElectricalEdge>& electrical_edges() const noexcept { return electrical_; }
    const std::vector<CommEdge>& comm_edges() const noexcept { return comm_; }
    double comm_delay() const noexcept { return comm_delay_; }

    // Throws LookupError for undeclared ids.
    std::size_t index_of(NodeId id) const;
    bool contains(NodeId id) const noexcept;

    std::optional<double> reactance(NodeId a, NodeId b) const;
    double comm_weight(NodeId a, NodeId b) const;  // 0 when not connected

    const std::vector<Neighbor>& electrical_neighbors(std::size_t index) const { return elec_adj_.at(index); }
    const std::vector<Neighbor>& comm_neighbors(std::size_t index) const { return comm_adj_.at(index); }

private:
    std::vector<NodeId> node_ids_;
    std::vector<ElectricalEdge> electrical_;
    std::vector<CommEdge> comm_;
    double comm_delay_ = 0.0;
    std::vector<std::vector<Neighbor>> elec_adj_;
    std::vector<std::vector<Neighbor>> comm_adj_;
};

// Active power flowing from i to j over a lossless line: sin(theta_i - theta_j) / X.
double tie_line_flow(double theta_i, double theta_j, double reactance);

// Total power flowing out of `node` over all its tie-lines.
double net_tie_line_injection(NodeId node, std::span<const double> theta, const GridTopology& topology);

// Same as above for every node, indexed like topology.node_ids().
std::vector<double> net_tie_line_injections(std::span<const double> theta, const GridTopology& topology);

}  // namespace dvpp
