#include "dvpp/presets.hpp"

#include "dvpp/errors.hpp"

namespace dvpp {

namespace {

constexpr double kDvppInertia = 0.01;
constexpr double kSupportInertia = 0.1;
constexpr double kUnmeasuredTau = 0.2;

ScenarioSpec base_4bus() {
    ScenarioSpec spec;
    spec.dt = 5e-4;
    spec.master_seed = 1;

    const double bess_limit[] = {0.02, 0.05, 0.01};
    const double fcr_pmax[] = {0.005, 0.003, 0.001};
    const double beta[] = {1.0, 2.0, 3.0};
    for (int k = 0; k < 3; ++k) {
        NodeParams p;
        p.id = k + 1;
        p.kind = NodeKind::Dvpp;
        p.inertia = kDvppInertia;
        p.bess_tau = 0.1;
        p.bess_min = -bess_limit[k];
        p.bess_max = bess_limit[k];
        p.fcr_pmax = fcr_pmax[k];
        p.beta = beta[k];
        p.alpha = 1.0;
        spec.nodes.push_back(p);
    }
    NodeParams sg;
    sg.id = 4;
    sg.kind = NodeKind::Sg;
    sg.inertia = 4.0;
    sg.inertia_after_trip = 0.005;
    sg.r_ibr = 0.05;
    sg.r_sg = 0.05;
    sg.governor_tau = 2.0;
    spec.nodes.push_back(sg);

    spec.network.electrical = {{1, 2, 0.1}, {2, 3, 0.1}, {3, 1, 0.1}, {3, 4, 0.02}};
    spec.network.comm = {{1, 2, 1.0}, {2, 3, 1.0}};
    spec.network.comm_delay = 0.5;

    spec.estimator.exo = ExoModel::constant();
    spec.estimator.kappa = (Eigen::VectorXd(2) << 20.0, 100.0).finished();
    return spec;
}

ScenarioEvent unmeasured_step(double t, NodeId node, double target) {
    return ScenarioEvent{t, EventKind::UnmeasuredPowerStep, node, target, kUnmeasuredTau, 0.0};
}

ScenarioSpec s2(bool inertia_support) {
    ScenarioSpec spec = base_4bus();
    spec.name = inertia_support ? "s2" : "s2-no-support";
    spec.horizon = 40.0;
    spec.events.push_back(unmeasured_step(5.0, 1, 0.015));
    spec.events.push_back({.time = 10.0, .kind = EventKind::SgTrip, .node = 4});
    if (inertia_support)
        for (NodeId id : {1, 2, 3})
            spec.events.push_back(
                {.time = 10.0, .kind = EventKind::InertiaSwitch, .node = id, .inertia = kSupportInertia});
    spec.events.push_back(unmeasured_step(15.0, 2, 0.01));
    spec.events.push_back(unmeasured_step(25.0, 3, 0.02));

    spec.stochastic.load_nodes = {1, 2, 3};
    spec.stochastic.res_nodes = {1, 2, 3};
    spec.stochastic.prbs = PrbsConfig{8, 0.002, 1e4};
    spec.stochastic.bmr = BmrConfig{0.005, 0.02, 0.5, spec.dt, false};

    spec.output.metrics_window_start = 10.0;
    spec.output.metrics_window_end = 40.0;
    return spec;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"s1", "s2", "s2-no-support"};
}

ScenarioSpec preset(std::string_view name) {
    if (name == "s1") {
        ScenarioSpec spec = base_4bus();
        spec.name = "s1";
        spec.horizon = 60.0;
        spec.events = {unmeasured_step(5.0, 1, 0.015), unmeasured_step(15.0, 2, 0.01),
                       unmeasured_step(25.0, 3, 0.02)};
        return spec;
    }
    if (name == "s2") return s2(true);
    if (name == "s2-no-support") return s2(false);

    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw LookupError("unknown preset '" + std::string(name) + "' (valid presets: " + valid + ")");
}

}  // namespace dvpp
