#include "dvpp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dvpp/errors.hpp"

namespace dvpp {

double unmeasured_power_dynamics(double current, double target, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ParameterError("unmeasured power time constant must be positive");
    return (target - current) / tau;
}

std::vector<NodeCertification> certify_scenario(const ScenarioSpec& spec) {
    std::vector<NodeCertification> out;
    for (const auto& n : spec.nodes) {
        if (n.kind != NodeKind::Dvpp) continue;
        std::vector<double> inertias{n.inertia};
        for (const auto& ev : spec.events)
            if (ev.kind == EventKind::InertiaSwitch && ev.node == n.id &&
                std::find(inertias.begin(), inertias.end(), ev.inertia) == inertias.end())
                inertias.push_back(ev.inertia);
        for (double h : inertias) {
            NodeCertification c;
            c.node = n.id;
            c.inertia = h * n.estimator_inertia_scale;
            const auto model = build_augmented(spec.estimator.exo, c.inertia);
            c.eigen = certify_gain(model, spec.estimator.kappa);
            c.lyapunov = certify_gain_lyapunov(model, spec.estimator.kappa);
            out.push_back(std::move(c));
        }
    }
    return out;
}

Simulator::Simulator(ScenarioSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    topology_ = spec_.topology();
    certification_ = certify_scenario(spec_);
    if (!spec_.estimator.allow_uncertified && !all_certified()) {
        std::vector<std::string> v;
        for (const auto& c : certification_)
            if (!c.eigen.certified)
                v.push_back("estimator gain is not certified for node " + std::to_string(c.node) + " at H = " +
                            std::to_string(c.inertia) + " (max real eigenvalue " + std::to_string(c.eigen.margin) +
                            ")");
        throw ValidationError(std::move(v));
    }

    const std::size_t n = spec_.nodes.size();
    const std::size_t delay = delay_steps(spec_.network.comm_delay, spec_.dt);
    nodes_.resize(n);
    states_.resize(n);
    p_unmeasured_.assign(n, 0.0);
    p_e_.assign(n, 0.0);
    p_res_.assign(n, 0.0);
    pending_.resize(n);

    auto has = [](const std::vector<NodeId>& v, NodeId id) { return std::find(v.begin(), v.end(), id) != v.end(); };
    auto bmr = spec_.stochastic.bmr;
    bmr.dt = spec_.dt;

    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = spec_.nodes[i];
        auto& rt = nodes_[i];
        rt.params = p;
        if (p.kind == NodeKind::Dvpp) {
            rt.fcr = FcrParams::from_capacity(p.fcr_pmax, spec_.control.fcr_band, spec_.control.fcr_literal_branch);
            rt.model = build_augmented(spec_.estimator.exo, p.inertia * p.estimator_inertia_scale);
            states_[i].x_hat = Eigen::VectorXd::Zero(rt.model.size());
            if (has(spec_.stochastic.load_nodes, p.id))
                rt.load.emplace(spec_.stochastic.prbs, RandomStream::substream(spec_.master_seed, p.id, "load"));
            if (has(spec_.stochastic.res_nodes, p.id))
                rt.res.emplace(bmr, RandomStream::substream(spec_.master_seed, p.id, "res"));
        }
        for (std::size_t k = 0; k < topology_.comm_neighbors(i).size(); ++k) {
            rt.inbox.emplace_back(delay);
            rt.inbox.back().push(0.0);
        }
    }

    TraceHeader header;
    header.scenario = spec_.name;
    header.seed = spec_.master_seed;
    header.rng_algorithm = std::string(RandomStream::kAlgorithmId);
    header.dt = spec_.dt;
    header.nodes = topology_.node_ids();
    for (const auto& n : spec_.nodes) header.node_kinds.push_back(n.kind);
    header.certification = certification_;
    std::vector<std::string> columns{"t"};
    for (NodeId id : topology_.node_ids())
        for (const char* s : kNodeSignals) columns.push_back(node_column(id, s));
    columns.emplace_back("mean_omega");
    trace_ = SimulationTrace(std::move(header), std::move(columns));
    trace_.reserve_rows(spec_.step_count() + 1);
    row_.resize(trace_.columns().size());

    evaluate();
    record();
}

bool Simulator::all_certified() const noexcept {
    return std::all_of(certification_.begin(), certification_.end(),
                       [](const NodeCertification& c) { return c.eigen.certified; });
}

double Simulator::effective_inertia(std::size_t i) const {
    const auto& rt = nodes_[i];
    return rt.tripped ? rt.params.inertia_after_trip : rt.params.inertia;
}

void Simulator::apply_events() {
    const double now = time();
    const double eps = 1e-9 * spec_.dt;
    while (next_event_ < spec_.events.size() && spec_.events[next_event_].time <= now + eps) {
        const auto& ev = spec_.events[next_event_++];
        const auto i = topology_.index_of(ev.node);
        auto& rt = nodes_[i];
        switch (ev.kind) {
            case EventKind::UnmeasuredPowerStep:
                rt.target = ev.target;
                rt.tau = ev.tau;
                break;
            case EventKind::SgTrip:
                rt.tripped = true;
                break;
            case EventKind::InertiaSwitch:
                if (rt.params.inertia == ev.inertia) break;
                rt.params.inertia = ev.inertia;
                if (rt.params.kind == NodeKind::Dvpp)
                    rt.model = build_augmented(spec_.estimator.exo, ev.inertia * rt.params.estimator_inertia_scale);
                break;
        }
    }
}

void Simulator::sample_stochastics() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto& rt = nodes_[i];
        if (rt.load) p_e_[i] = step_ == 0 ? rt.load->value() : rt.load->step();
        if (rt.res) p_res_[i] = step_ == 0 ? rt.res->value() : rt.res->step();
    }
}

void Simulator::evaluate() {
    apply_events();
    sample_stochastics();

    std::vector<double> theta(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) theta[i] = states_[i].theta;
    const auto tie = net_tie_line_injections(theta, topology_);

    const double mismatch_sign = spec_.control.dapi_literal_sign ? 1.0 : -1.0;
    std::vector<DelayedNeighbor> received;

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& rt = nodes_[i];
        const auto& s = states_[i];
        auto& pd = pending_[i];
        pd.p_e = p_e_[i];
        pd.p_res = p_res_[i];
        pd.tie = tie[i];

        if (rt.params.kind == NodeKind::Sg) {
            const auto d = sg_derivatives(s, pd.p_e, pd.tie, rt.params, rt.tripped);
            pd.dtheta = d.dtheta;
            pd.domega = d.domega;
            pd.dp_m = d.dp_m;
            continue;
        }

        pd.p_fcr = fcr_response(s.omega, rt.fcr);

        // Estimator input uses measured quantities only.
        const double f = -pd.p_e + pd.p_res - pd.p_fcr - pd.tie;
        pd.dx_hat = estimator_derivative(s.x_hat, s.omega, s.u_m, f, rt.model, spec_.estimator.kappa);
        pd.p_hat = estimated_unmeasured_power(s.x_hat, rt.model);

        received.clear();
        const auto& neighbors = topology_.comm_neighbors(i);
        for (std::size_t k = 0; k < neighbors.size(); ++k) {
            const auto j = neighbors[k].index;
            received.push_back({rt.inbox[k].read(), nodes_[j].params.beta, neighbors[k].value});
        }
        pd.delta_d = dapi_mismatch(pd.p_e, pd.p_hat, pd.p_res, s.u_m);
        pd.u_star = final_setpoint(s.u_delta, pd.p_e, pd.p_hat, pd.p_res);

        DvppInputs in{pd.p_e, p_unmeasured_[i], pd.p_res, pd.u_star, pd.tie};
        const auto d = dvpp_derivatives(s, in, rt.params, rt.fcr);
        pd.dtheta = d.dtheta;
        pd.domega = d.domega;
        pd.du_m = d.du_m;
        pd.du_delta = dapi_derivative(rt.params, mismatch_sign * pd.delta_d, s.u_delta, received);
        pd.dp_unmeasured = unmeasured_power_dynamics(p_unmeasured_[i], rt.target, rt.tau);
    }
}

void Simulator::record() {
    std::size_t c = 0;
    row_[c++] = time();
    double mean = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& s = states_[i];
        const auto& pd = pending_[i];
        const bool dvpp = nodes_[i].params.kind == NodeKind::Dvpp;
        row_[c++] = s.theta;
        row_[c++] = s.omega;
        row_[c++] = dvpp ? estimated_frequency(s.x_hat) : 0.0;
        row_[c++] = p_unmeasured_[i];
        row_[c++] = dvpp ? pd.p_hat : 0.0;
        row_[c++] = pd.p_e;
        row_[c++] = pd.p_res;
        row_[c++] = dvpp ? pd.p_fcr : 0.0;
        row_[c++] = dvpp ? pd.u_star : 0.0;
        row_[c++] = s.u_m;
        row_[c++] = s.u_delta;
        row_[c++] = dvpp ? pd.delta_d : 0.0;
        row_[c++] = pd.tie;
        row_[c++] = s.p_m;
        row_[c++] = effective_inertia(i);
        row_[c++] = pd.domega;
        mean += s.omega;
    }
    row_[c++] = mean / static_cast<double>(nodes_.size());
    for (std::size_t k = 0; k < row_.size(); ++k)
        if (!std::isfinite(row_[k])) throw NumericFault(step_, trace_.columns()[k]);
    trace_.append_row(row_);
}

void Simulator::check_finite() const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const auto& s = states_[i];
        const NodeId id = nodes_[i].params.id;
        auto check = [&](double v, const char* name) {
            if (!std::isfinite(v)) throw NumericFault(step_, node_column(id, name));
        };
        check(s.theta, "theta");
        check(s.omega, "omega");
        check(s.u_m, "u_m");
        check(s.u_delta, "u_delta");
        check(s.p_m, "p_m");
        check(p_unmeasured_[i], "p_unmeas");
        if (s.x_hat.size() > 0 && !s.x_hat.allFinite()) throw NumericFault(step_, node_column(id, "x_hat"));
    }
}

void Simulator::step() {
    const double dt = spec_.dt;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto& s = states_[i];
        const auto& pd = pending_[i];
        const auto& p = nodes_[i].params;
        s.theta += dt * pd.dtheta;
        s.omega += dt * pd.domega;
        if (p.kind == NodeKind::Sg) {
            s.p_m += dt * pd.dp_m;
            continue;
        }
        s.u_m = std::clamp(s.u_m + dt * pd.du_m, p.bess_min, p.bess_max);
        s.u_delta += dt * pd.du_delta;
        s.x_hat += dt * pd.dx_hat;
        p_unmeasured_[i] += dt * pd.dp_unmeasured;
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& neighbors = topology_.comm_neighbors(i);
        for (std::size_t k = 0; k < neighbors.size(); ++k)
            nodes_[i].inbox[k].push(states_[neighbors[k].index].u_delta);
    }
    ++step_;
    check_finite();
    evaluate();
    record();
}

SimulationTrace run(const ScenarioSpec& spec) {
    Simulator sim(spec);
    while (!sim.done()) sim.step();
    return sim.take_trace();
}

}  // namespace dvpp
