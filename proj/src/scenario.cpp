#include "dvpp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dvpp/errors.hpp"

namespace dvpp {

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::UnmeasuredPowerStep: return "unmeasured_power_step";
        case EventKind::SgTrip: return "sg_trip";
        case EventKind::InertiaSwitch: return "inertia_switch";
    }
    return "unknown";
}

std::vector<std::string> ScenarioSpec::violations() const {
    std::vector<std::string> out;
    auto require = [&](bool ok, std::string msg) {
        if (!ok) out.push_back(std::move(msg));
    };

    require(std::isfinite(horizon) && horizon >= 0.0, "simulation.horizon must be non-negative");
    require(std::isfinite(dt) && dt > 0.0, "simulation.dt must be positive");
    require(!nodes.empty(), "nodes: at least one node is required");

    std::set<NodeId> ids;
    for (const auto& n : nodes) {
        require(ids.insert(n.id).second, "nodes: duplicate node id " + std::to_string(n.id));
        for (auto& v : dvpp::validate(n)) out.push_back("nodes: " + v);
    }
    auto kind_of = [&](NodeId id) -> const NodeParams* {
        for (const auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    };

    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t k = 0; k < network.electrical.size(); ++k) {
        const auto& e = network.electrical[k];
        const std::string where = "network.electrical[" + std::to_string(k) + "]: ";
        require(ids.count(e.from) && ids.count(e.to), where + "endpoint is not a declared node");
        require(e.from != e.to, where + "self-loop");
        require(std::isfinite(e.reactance) && e.reactance > 0.0, where + "reactance must be positive");
        require(seen.insert(std::minmax(e.from, e.to)).second, where + "duplicate edge");
    }
    seen.clear();
    for (std::size_t k = 0; k < network.comm.size(); ++k) {
        const auto& e = network.comm[k];
        const std::string where = "network.communication[" + std::to_string(k) + "]: ";
        require(ids.count(e.from) && ids.count(e.to), where + "endpoint is not a declared node");
        require(e.from != e.to, where + "self-loop");
        require(std::isfinite(e.weight) && e.weight >= 0.0, where + "weight must be non-negative");
        require(seen.insert(std::minmax(e.from, e.to)).second, where + "duplicate edge");
        for (NodeId id : {e.from, e.to}) {
            const auto* n = kind_of(id);
            require(!n || n->kind == NodeKind::Dvpp, where + "node " + std::to_string(id) + " is not a DVPP node");
        }
    }
    require(std::isfinite(network.comm_delay) && network.comm_delay >= 0.0,
            "network.comm_delay must be non-negative");

    for (auto& v : estimator.exo.violations()) out.push_back("estimator: " + v);
    require(estimator.kappa.size() == estimator.exo.order() + 1,
            "estimator.kappa must have exo order + 1 entries");
    require(estimator.kappa.allFinite(), "estimator.kappa entries must be finite");

    require(std::isfinite(control.fcr_band) && control.fcr_band > 0.0, "control.fcr_band must be positive");

    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& ev = events[k];
        const std::string where = "events[" + std::to_string(k) + "]: ";
        require(std::isfinite(ev.time) && ev.time >= 0.0 && ev.time <= horizon, where + "time must lie within [0, horizon]");
        if (k > 0) require(events[k - 1].time <= ev.time, where + "events must be sorted by time");
        const auto* n = kind_of(ev.node);
        if (!n) {
            out.push_back(where + "node " + std::to_string(ev.node) + " is not declared");
            continue;
        }
        switch (ev.kind) {
            case EventKind::UnmeasuredPowerStep:
                require(n->kind == NodeKind::Dvpp, where + "unmeasured_power_step requires a DVPP node");
                require(std::isfinite(ev.target), where + "target must be finite");
                require(std::isfinite(ev.tau) && ev.tau > 0.0, where + "tau must be positive");
                break;
            case EventKind::SgTrip:
                require(n->kind == NodeKind::Sg, where + "sg_trip requires an SG node");
                break;
            case EventKind::InertiaSwitch:
                require(std::isfinite(ev.inertia) && ev.inertia > 0.0, where + "inertia must be positive");
                break;
        }
    }

    auto check_nodes = [&](const std::vector<NodeId>& list, const std::string& field) {
        for (NodeId id : list) {
            const auto* n = kind_of(id);
            require(n != nullptr, field + ": node " + std::to_string(id) + " is not declared");
            require(!n || n->kind == NodeKind::Dvpp, field + ": node " + std::to_string(id) + " is not a DVPP node");
        }
    };
    check_nodes(stochastic.load_nodes, "stochastic.load.nodes");
    check_nodes(stochastic.res_nodes, "stochastic.res.nodes");
    if (!stochastic.load_nodes.empty())
        for (auto& v : stochastic.prbs.violations()) out.push_back("stochastic.load: " + v);
    if (!stochastic.res_nodes.empty()) {
        auto bmr = stochastic.bmr;
        bmr.dt = dt > 0.0 ? dt : 1.0;
        for (auto& v : bmr.violations()) out.push_back("stochastic.res: " + v);
    }

    require(output.decimation >= 1, "output.decimation must be at least 1");
    return out;
}

void ScenarioSpec::validate() const {
    if (auto v = violations(); !v.empty()) throw ValidationError(std::move(v));
}

GridTopology ScenarioSpec::topology() const {
    std::vector<NodeId> ids;
    for (const auto& n : nodes) ids.push_back(n.id);
    return GridTopology(std::move(ids), network.electrical, network.comm, network.comm_delay);
}

std::size_t ScenarioSpec::step_count() const {
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

const NodeParams& ScenarioSpec::node(NodeId id) const {
    for (const auto& n : nodes)
        if (n.id == id) return n;
    throw LookupError("unknown node id " + std::to_string(id));
}

static bool same_edges(const NetworkSpec& a, const NetworkSpec& b) {
    if (a.electrical.size() != b.electrical.size() || a.comm.size() != b.comm.size()) return false;
    for (std::size_t i = 0; i < a.electrical.size(); ++i) {
        const auto &x = a.electrical[i], &y = b.electrical[i];
        if (x.from != y.from || x.to != y.to || x.reactance != y.reactance) return false;
    }
    for (std::size_t i = 0; i < a.comm.size(); ++i) {
        const auto &x = a.comm[i], &y = b.comm[i];
        if (x.from != y.from || x.to != y.to || x.weight != y.weight) return false;
    }
    return a.comm_delay == b.comm_delay;
}

template <typename M>
static bool same_matrix(const M& x, const M& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
}

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b) {
    return a.name == b.name && a.horizon == b.horizon && a.dt == b.dt && a.master_seed == b.master_seed &&
           a.nodes == b.nodes && same_edges(a.network, b.network) && same_matrix(a.estimator.exo.a, b.estimator.exo.a) &&
           same_matrix(a.estimator.exo.c, b.estimator.exo.c) &&
           same_matrix(a.estimator.kappa, b.estimator.kappa) &&
           a.estimator.allow_uncertified == b.estimator.allow_uncertified && a.control == b.control &&
           a.events == b.events && a.stochastic.load_nodes == b.stochastic.load_nodes &&
           a.stochastic.res_nodes == b.stochastic.res_nodes && a.stochastic.prbs == b.stochastic.prbs &&
           a.stochastic.bmr == b.stochastic.bmr && a.output.decimation == b.output.decimation &&
           a.output.metrics_window_start == b.output.metrics_window_start &&
           a.output.metrics_window_end == b.output.metrics_window_end &&
           a.output.inertia_weighted_mean == b.output.inertia_weighted_mean;
}

}  // namespace dvpp
