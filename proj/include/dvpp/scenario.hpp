#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dvpp/estimator.hpp"
#include "dvpp/grid_model.hpp"
#include "dvpp/node_dynamics.hpp"
#include "dvpp/stochastic.hpp"

namespace dvpp {

enum class EventKind { UnmeasuredPowerStep, SgTrip, InertiaSwitch };

std::string to_string(EventKind kind);

struct ScenarioEvent {
    double time = 0.0;
    EventKind kind = EventKind::UnmeasuredPowerStep;
    NodeId node = 0;
    double target = 0.0;   // unmeasured_power_step
    double tau = 0.2;      // unmeasured_power_step
    double inertia = 0.0;  // inertia_switch

    bool operator==(const ScenarioEvent&) const = default;
};

struct NetworkSpec {
    std::vector<ElectricalEdge> electrical;
    std::vector<CommEdge> comm;
    double comm_delay = 0.5;
};

struct EstimatorSpec {
    ExoModel exo = ExoModel::constant();
    Eigen::VectorXd kappa = (Eigen::VectorXd(2) << 20.0, 100.0).finished();
    // Run even when a gain fails certification (the failure is still reported).
    bool allow_uncertified = false;
};

struct ControlOptions {
    double fcr_band = kDefaultFcrBand;
    bool fcr_literal_branch = false;
    // Integrate the DAPI law with the mismatch sign exactly as printed (-alpha * (+mismatch + ...)).
    // The default feeds the mismatch with the opposite sign so that a local surplus raises u_delta.
    bool dapi_literal_sign = false;

    bool operator==(const ControlOptions&) const = default;
};

struct StochasticSpec {
    std::vector<NodeId> load_nodes;  // PRBS drives P_e
    std::vector<NodeId> res_nodes;   // BMR drives P_res
    PrbsConfig prbs;
    BmrConfig bmr;  // bmr.dt is overwritten with the simulation step

    bool enabled() const noexcept { return !load_nodes.empty() || !res_nodes.empty(); }
};

struct OutputOptions {
    std::size_t decimation = 1;
    double metrics_window_start = 0.0;
    double metrics_window_end = -1.0;  // negative: horizon
    bool inertia_weighted_mean = false;
};

struct ScenarioSpec {
    std::string name = "custom";
    double horizon = 0.0;
    double dt = 5e-4;
    std::uint64_t master_seed = 0;
    std::vector<NodeParams> nodes;
    NetworkSpec network;
    EstimatorSpec estimator;
    ControlOptions control;
    std::vector<ScenarioEvent> events;
    StochasticSpec stochastic;
    OutputOptions output;

    // Every violated constraint, with the offending field named. Empty when valid.
    std::vector<std::string> violations() const;
    // Throws ValidationError when violations() is not empty.
    void validate() const;

    GridTopology topology() const;
    std::size_t step_count() const;
    const NodeParams& node(NodeId id) const;
};

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b);

}  // namespace dvpp
