#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dvpp/coordination.hpp"
#include "dvpp/estimator.hpp"
#include "dvpp/node_dynamics.hpp"
#include "dvpp/scenario.hpp"
#include "dvpp/stochastic.hpp"
#include "dvpp/trace.hpp"

namespace dvpp {

// First-order lag of the unmeasured power toward its event target.
double unmeasured_power_dynamics(double current, double target, double tau);

// Certifies the estimator gain at every inertia value each DVPP node will see during the run
// (initial value and every inertia_switch target), scaled by the node's estimator_inertia_scale.
std::vector<NodeCertification> certify_scenario(const ScenarioSpec& spec);

// Fixed-step forward-Euler integration of the coupled grid.
//
// Each step n evaluates, at t_n and from the state at t_n only:
//   1. due events   2. stochastic samples   3. tie-line injections   4. FCR responses
//   5. estimator derivatives   6. local + DAPI setpoints (delayed neighbour values)
//   7. plant and DAPI derivatives
// then records the row for t_n and, when advancing, applies
//   8. one simultaneous Euler update of every continuous state   9. delay-line pushes.
class Simulator {
public:
    explicit Simulator(ScenarioSpec spec);

    const ScenarioSpec& spec() const noexcept { return spec_; }
    const std::vector<NodeCertification>& certification() const noexcept { return certification_; }
    bool all_certified() const noexcept;

    std::size_t step_index() const noexcept { return step_; }
    double time() const noexcept { return static_cast<double>(step_) * spec_.dt; }
    const std::vector<NodeState>& states() const noexcept { return states_; }
    const std::vector<double>& unmeasured_power() const noexcept { return p_unmeasured_; }

    // Advances from t_n to t_{n+1} and records the new row.
    void step();
    bool done() const noexcept { return step_ >= spec_.step_count(); }

    const SimulationTrace& trace() const noexcept { return trace_; }
    SimulationTrace take_trace() { return std::move(trace_); }

private:
    struct NodeRuntime {
        NodeParams params;
        FcrParams fcr;
        bool tripped = false;
        double target = 0.0;
        double tau = 0.2;
        AugmentedModel model;  // DVPP only
        std::optional<PrbsGenerator> load;
        std::optional<BmrGenerator> res;
        // One delay line per incoming communication edge, aligned with comm_neighbors().
        std::vector<DelayLine> inbox;
    };

    struct Pending {
        double p_e = 0, p_res = 0, tie = 0, p_fcr = 0, p_hat = 0, u_star = 0, delta_d = 0;
        double dtheta = 0, domega = 0, du_m = 0, du_delta = 0, dp_m = 0, dp_unmeasured = 0;
        Eigen::VectorXd dx_hat;
    };

    void apply_events();
    void sample_stochastics();
    void evaluate();
    void record();
    void check_finite() const;
    double effective_inertia(std::size_t i) const;

    ScenarioSpec spec_;
    GridTopology topology_;
    std::vector<NodeCertification> certification_;
    std::vector<NodeRuntime> nodes_;
    std::vector<NodeState> states_;
    std::vector<double> p_unmeasured_;
    std::vector<double> p_e_;
    std::vector<double> p_res_;
    std::vector<Pending> pending_;
    std::size_t next_event_ = 0;
    std::size_t step_ = 0;
    SimulationTrace trace_;
    std::vector<double> row_;
};

// Validates, certifies and runs the scenario to its horizon.
SimulationTrace run(const ScenarioSpec& spec);

}  // namespace dvpp
