#include "dvpp/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "dvpp/errors.hpp"

namespace dvpp {

using nlohmann::json;

namespace {

// Reads keys from one JSON object, recording type errors, missing keys and unknown keys.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path, std::vector<std::string>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {
        if (!obj_.is_object()) {
            errors_.push_back(where() + ": expected an object");
            valid_ = false;
        }
    }

    bool valid() const noexcept { return valid_; }
    std::string child(const std::string& key) const { return path_ + "/" + key; }

    const json* get(const std::string& key, bool required) {
        known_.insert(key);
        if (!valid_) return nullptr;
        auto it = obj_.find(key);
        if (it == obj_.end()) {
            if (required) errors_.push_back(child(key) + ": missing required key");
            return nullptr;
        }
        return &*it;
    }

    void number(const std::string& key, double& out, bool required = true) {
        if (const json* v = get(key, required)) {
            if (v->is_number()) out = v->get<double>();
            else errors_.push_back(child(key) + ": expected a number");
        }
    }

    void integer(const std::string& key, int& out, bool required = true) {
        if (const json* v = get(key, required)) {
            if (v->is_number_integer()) out = v->get<int>();
            else errors_.push_back(child(key) + ": expected an integer");
        }
    }

    void unsigned_integer(const std::string& key, std::uint64_t& out, bool required = true) {
        if (const json* v = get(key, required)) {
            if (v->is_number_unsigned() || (v->is_number_integer() && v->get<std::int64_t>() >= 0))
                out = v->get<std::uint64_t>();
            else
                errors_.push_back(child(key) + ": expected a non-negative integer");
        }
    }

    void size(const std::string& key, std::size_t& out, bool required = true) {
        std::uint64_t v = out;
        unsigned_integer(key, v, required);
        out = static_cast<std::size_t>(v);
    }

    void boolean(const std::string& key, bool& out, bool required = true) {
        if (const json* v = get(key, required)) {
            if (v->is_boolean()) out = v->get<bool>();
            else errors_.push_back(child(key) + ": expected true or false");
        }
    }

    void string(const std::string& key, std::string& out, bool required = true) {
        if (const json* v = get(key, required)) {
            if (v->is_string()) out = v->get<std::string>();
            else errors_.push_back(child(key) + ": expected a string");
        }
    }

    void node_list(const std::string& key, std::vector<NodeId>& out, bool required = true) {
        if (const json* v = get(key, required)) {
            if (!v->is_array()) {
                errors_.push_back(child(key) + ": expected an array of node ids");
                return;
            }
            out.clear();
            for (std::size_t k = 0; k < v->size(); ++k) {
                if ((*v)[k].is_number_integer()) out.push_back((*v)[k].get<int>());
                else errors_.push_back(child(key) + "/" + std::to_string(k) + ": expected an integer node id");
            }
        }
    }

    void finish() {
        if (!valid_) return;
        for (const auto& [key, _] : obj_.items())
            if (!known_.count(key)) errors_.push_back(where() + ": unknown key '" + key + "'");
    }

private:
    std::string where() const { return path_.empty() ? "/" : path_; }

    const json& obj_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> known_;
    bool valid_ = true;
};

void line_column(std::string_view text, std::size_t byte, std::size_t& line, std::size_t& col) {
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

std::optional<Eigen::VectorXd> read_vector(const json& v, const std::string& path, std::vector<std::string>& errors) {
    if (!v.is_array() || v.empty()) {
        errors.push_back(path + ": expected a non-empty array of numbers");
        return std::nullopt;
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number()) {
            errors.push_back(path + "/" + std::to_string(k) + ": expected a number");
            return std::nullopt;
        }
        out(static_cast<Eigen::Index>(k)) = v[k].get<double>();
    }
    return out;
}

void read_simulation(const json& j, ScenarioSpec& spec, std::vector<std::string>& errors) {
    ObjectReader r(j, "/simulation", errors);
    r.number("horizon", spec.horizon);
    r.number("dt", spec.dt, false);
    r.unsigned_integer("seed", spec.master_seed, false);
    r.finish();
}

void read_node(const json& j, const std::string& path, ScenarioSpec& spec, std::vector<std::string>& errors) {
    ObjectReader r(j, path, errors);
    if (!r.valid()) return;
    NodeParams p;
    r.integer("id", p.id);
    std::string kind;
    r.string("kind", kind);
    if (kind == "dvpp") p.kind = NodeKind::Dvpp;
    else if (kind == "sg") p.kind = NodeKind::Sg;
    else if (!kind.empty()) errors.push_back(r.child("kind") + ": expected \"dvpp\" or \"sg\"");
    r.number("H", p.inertia);
    if (p.kind == NodeKind::Dvpp) {
        r.number("bess_tau", p.bess_tau);
        r.number("bess_min", p.bess_min);
        r.number("bess_max", p.bess_max);
        r.number("fcr_pmax", p.fcr_pmax);
        r.number("beta", p.beta);
        r.number("alpha", p.alpha);
        r.number("estimator_h_scale", p.estimator_inertia_scale, false);
    } else {
        r.number("R_ibr", p.r_ibr);
        p.r_sg = p.r_ibr;
        r.number("R_sg", p.r_sg, false);
        r.number("T_g", p.governor_tau);
        r.number("H_after_trip", p.inertia_after_trip, false);
    }
    r.finish();
    spec.nodes.push_back(p);
}

void read_network(const json& j, ScenarioSpec& spec, std::vector<std::string>& errors) {
    ObjectReader r(j, "/network", errors);
    if (const json* el = r.get("electrical", true)) {
        if (!el->is_array()) errors.push_back("/network/electrical: expected an array");
        else
            for (std::size_t k = 0; k < el->size(); ++k) {
                ObjectReader e((*el)[k], "/network/electrical/" + std::to_string(k), errors);
                ElectricalEdge edge{};
                e.integer("from", edge.from);
                e.integer("to", edge.to);
                e.number("X", edge.reactance);
                e.finish();
                if (e.valid()) spec.network.electrical.push_back(edge);
            }
    }
    if (const json* cm = r.get("communication", false)) {
        if (!cm->is_array()) errors.push_back("/network/communication: expected an array");
        else
            for (std::size_t k = 0; k < cm->size(); ++k) {
                ObjectReader e((*cm)[k], "/network/communication/" + std::to_string(k), errors);
                CommEdge edge{0, 0, 1.0};
                e.integer("from", edge.from);
                e.integer("to", edge.to);
                e.number("w", edge.weight, false);
                e.finish();
                if (e.valid()) spec.network.comm.push_back(edge);
            }
    }
    r.number("comm_delay", spec.network.comm_delay, false);
    r.finish();
}

void read_estimator(const json& j, ScenarioSpec& spec, std::vector<std::string>& errors) {
    ObjectReader r(j, "/estimator", errors);
    if (const json* exo = r.get("exo", false)) {
        ObjectReader e(*exo, "/estimator/exo", errors);
        const json* a = e.get("A", true);
        const json* c = e.get("C", true);
        e.finish();
        if (a && c) {
            bool ok = a->is_array() && !a->empty();
            const std::size_t m = ok ? a->size() : 0;
            Eigen::MatrixXd am(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            for (std::size_t row = 0; ok && row < m; ++row) {
                const auto& rj = (*a)[row];
                if (!rj.is_array() || rj.size() != m) {
                    ok = false;
                    break;
                }
                for (std::size_t col = 0; col < m; ++col) {
                    if (!rj[col].is_number()) {
                        ok = false;
                        break;
                    }
                    am(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = rj[col].get<double>();
                }
            }
            if (!ok) errors.push_back("/estimator/exo/A: expected a square array of numeric rows");
            auto cv = read_vector(*c, "/estimator/exo/C", errors);
            if (ok && cv) spec.estimator.exo = ExoModel{am, cv->transpose()};
        }
    }
    if (const json* k = r.get("kappa", true))
        if (auto v = read_vector(*k, "/estimator/kappa", errors)) spec.estimator.kappa = *v;
    r.boolean("allow_uncertified", spec.estimator.allow_uncertified, false);
    r.finish();
}

void read_control(const json& j, ScenarioSpec& spec, std::vector<std::string>& errors) {
    ObjectReader r(j, "/control", errors);
    r.number("fcr_band", spec.control.fcr_band, false);
    r.boolean("fcr_literal_branch", spec.control.fcr_literal_branch, false);
    r.boolean("dapi_literal_sign", spec.control.dapi_literal_sign, false);
    r.finish();
}

void read_events(const json& j, ScenarioSpec& spec, std::vector<std::string>& errors) {
    if (!j.is_array()) {
        errors.push_back("/events: expected an array");
        return;
    }
    for (std::size_t k = 0; k < j.size(); ++k) {
        ObjectReader r(j[k], "/events/" + std::to_string(k), errors);
        if (!r.valid()) continue;
        ScenarioEvent ev;
        r.number("time", ev.time);
        std::string kind;
        r.string("kind", kind);
        r.integer("node", ev.node);
        if (kind == "unmeasured_power_step") {
            ev.kind = EventKind::UnmeasuredPowerStep;
            r.number("target", ev.target);
            r.number("tau", ev.tau, false);
        } else if (kind == "sg_trip") {
            ev.kind = EventKind::SgTrip;
        } else if (kind == "inertia_switch") {
            ev.kind = EventKind::InertiaSwitch;
            r.number("H", ev.inertia);
        } else if (!kind.empty()) {
            errors.push_back(r.child("kind") +
                             ": expected unmeasured_power_step, sg_trip or inertia_switch");
        }
        r.finish();
        spec.events.push_back(ev);
    }
}

void read_stochastic(const json& j, ScenarioSpec& spec, std::vector<std::string>& errors) {
    ObjectReader r(j, "/stochastic", errors);
    if (const json* load = r.get("load", false)) {
        ObjectReader l(*load, "/stochastic/load", errors);
        l.node_list("nodes", spec.stochastic.load_nodes);
        l.integer("N_nu", spec.stochastic.prbs.components);
        l.number("h", spec.stochastic.prbs.magnitude);
        l.number("s_f", spec.stochastic.prbs.switching_scale);
        l.finish();
    }
    if (const json* res = r.get("res", false)) {
        ObjectReader b(*res, "/stochastic/res", errors);
        b.node_list("nodes", spec.stochastic.res_nodes);
        b.number("sigma", spec.stochastic.bmr.sigma);
        b.number("theta_th", spec.stochastic.bmr.reset_threshold);
        b.number("lambda_r", spec.stochastic.bmr.decay);
        b.boolean("reset_state", spec.stochastic.bmr.reset_state, false);
        b.finish();
    }
    r.finish();
}

void read_output(const json& j, ScenarioSpec& spec, std::vector<std::string>& errors) {
    ObjectReader r(j, "/output", errors);
    r.size("decimation", spec.output.decimation, false);
    r.number("metrics_window_start", spec.output.metrics_window_start, false);
    r.number("metrics_window_end", spec.output.metrics_window_end, false);
    r.boolean("inertia_weighted_mean", spec.output.inertia_weighted_mean, false);
    r.finish();
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view text) {
    json doc;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(text.begin(), text.end());
        } catch (const json::parse_error& e) {
            std::size_t line = 0, col = 0;
            line_column(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
            // drop the library's own "[json.exception...] parse error at line L, column C: " prefix
            std::string msg = e.what();
            if (const auto at = msg.find(": ", msg.find("column")); at != std::string::npos) msg.erase(0, at + 2);
            throw ConfigParseError(line, col, msg);
        }
    }

    std::vector<std::string> errors;
    ScenarioSpec spec;
    ObjectReader root(doc, "", errors);
    if (!root.valid()) throw ValidationError(std::move(errors));

    root.string("name", spec.name, false);
    if (const json* s = root.get("simulation", true)) read_simulation(*s, spec, errors);
    if (const json* n = root.get("nodes", true)) {
        if (!n->is_array() || n->empty()) errors.emplace_back("/nodes: expected a non-empty array");
        else
            for (std::size_t k = 0; k < n->size(); ++k) read_node((*n)[k], "/nodes/" + std::to_string(k), spec, errors);
    }
    if (const json* n = root.get("network", true)) read_network(*n, spec, errors);
    if (const json* e = root.get("estimator", true)) read_estimator(*e, spec, errors);
    if (const json* c = root.get("control", false)) read_control(*c, spec, errors);
    if (const json* e = root.get("events", false)) read_events(*e, spec, errors);
    if (const json* s = root.get("stochastic", false)) read_stochastic(*s, spec, errors);
    if (const json* o = root.get("output", false)) read_output(*o, spec, errors);
    root.finish();

    // Semantic checks only make sense once the structure is sound.
    if (errors.empty())
        for (auto& v : spec.violations()) errors.push_back(std::move(v));
    if (!errors.empty()) throw ValidationError(std::move(errors));
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

json scenario_to_json(const ScenarioSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["simulation"] = {{"horizon", spec.horizon}, {"dt", spec.dt}, {"seed", spec.master_seed}};

    json nodes = json::array();
    for (const auto& n : spec.nodes) {
        json o{{"id", n.id}, {"kind", to_string(n.kind)}, {"H", n.inertia}};
        if (n.kind == NodeKind::Dvpp) {
            o["bess_tau"] = n.bess_tau;
            o["bess_min"] = n.bess_min;
            o["bess_max"] = n.bess_max;
            o["fcr_pmax"] = n.fcr_pmax;
            o["beta"] = n.beta;
            o["alpha"] = n.alpha;
            o["estimator_h_scale"] = n.estimator_inertia_scale;
        } else {
            o["R_ibr"] = n.r_ibr;
            o["R_sg"] = n.r_sg;
            o["T_g"] = n.governor_tau;
            o["H_after_trip"] = n.inertia_after_trip;
        }
        nodes.push_back(std::move(o));
    }
    j["nodes"] = std::move(nodes);

    json el = json::array(), cm = json::array();
    for (const auto& e : spec.network.electrical) el.push_back({{"from", e.from}, {"to", e.to}, {"X", e.reactance}});
    for (const auto& e : spec.network.comm) cm.push_back({{"from", e.from}, {"to", e.to}, {"w", e.weight}});
    j["network"] = {{"electrical", el}, {"communication", cm}, {"comm_delay", spec.network.comm_delay}};

    json a = json::array();
    for (Eigen::Index r = 0; r < spec.estimator.exo.a.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < spec.estimator.exo.a.cols(); ++c) row.push_back(spec.estimator.exo.a(r, c));
        a.push_back(std::move(row));
    }
    json c = json::array(), kappa = json::array();
    for (Eigen::Index k = 0; k < spec.estimator.exo.c.size(); ++k) c.push_back(spec.estimator.exo.c(k));
    for (Eigen::Index k = 0; k < spec.estimator.kappa.size(); ++k) kappa.push_back(spec.estimator.kappa(k));
    j["estimator"] = {{"exo", {{"A", a}, {"C", c}}},
                      {"kappa", kappa},
                      {"allow_uncertified", spec.estimator.allow_uncertified}};

    j["control"] = {{"fcr_band", spec.control.fcr_band},
                    {"fcr_literal_branch", spec.control.fcr_literal_branch},
                    {"dapi_literal_sign", spec.control.dapi_literal_sign}};

    json events = json::array();
    for (const auto& ev : spec.events) {
        json o{{"time", ev.time}, {"kind", to_string(ev.kind)}, {"node", ev.node}};
        if (ev.kind == EventKind::UnmeasuredPowerStep) {
            o["target"] = ev.target;
            o["tau"] = ev.tau;
        } else if (ev.kind == EventKind::InertiaSwitch) {
            o["H"] = ev.inertia;
        }
        events.push_back(std::move(o));
    }
    j["events"] = std::move(events);

    const auto& st = spec.stochastic;
    json stochastic = {{"load",
                        {{"nodes", st.load_nodes},
                         {"N_nu", st.prbs.components},
                         {"h", st.prbs.magnitude},
                         {"s_f", st.prbs.switching_scale}}},
                       {"res",
                        {{"nodes", st.res_nodes},
                         {"sigma", st.bmr.sigma},
                         {"theta_th", st.bmr.reset_threshold},
                         {"lambda_r", st.bmr.decay},
                         {"reset_state", st.bmr.reset_state}}}};
    j["stochastic"] = std::move(stochastic);

    json output{{"decimation", spec.output.decimation},
                {"metrics_window_start", spec.output.metrics_window_start},
                {"inertia_weighted_mean", spec.output.inertia_weighted_mean}};
    if (spec.output.metrics_window_end >= 0.0) output["metrics_window_end"] = spec.output.metrics_window_end;
    j["output"] = std::move(output);
    return j;
}

std::string emit_scenario(const ScenarioSpec& spec) {
    return scenario_to_json(spec).dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex_digest(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string config_hash(const ScenarioSpec& spec) {
    return hex_digest(fnv1a64(emit_scenario(spec)));
}

}  // namespace dvpp
