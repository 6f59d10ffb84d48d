#include <doctest.h>

#include <algorithm>
#include <string>

#include "dvpp/config.hpp"
#include "dvpp/errors.hpp"
#include "dvpp/presets.hpp"

using namespace dvpp;

namespace {

std::vector<std::string> violations_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.violations();
    }
    return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("presets round-trip through the config format") {
    for (const auto& name : preset_names()) {
        const auto spec = preset(name);
        const auto text = emit_scenario(spec);
        const auto back = parse_scenario(text);
        CHECK(back == spec);
        CHECK(emit_scenario(back) == text);
        CHECK(config_hash(back) == config_hash(spec));
    }
}

TEST_CASE("preset values") {
    const auto s1 = preset("s1");
    CHECK(s1.dt == 5e-4);
    CHECK(s1.horizon == 60.0);
    REQUIRE(s1.nodes.size() == 4);
    CHECK(s1.node(1).bess_max == 0.02);
    CHECK(s1.node(2).bess_max == 0.05);
    CHECK(s1.node(3).bess_max == 0.01);
    CHECK(s1.node(3).bess_min == -0.01);
    CHECK(s1.node(1).fcr_pmax == 0.005);
    CHECK(s1.node(2).fcr_pmax == 0.003);
    CHECK(s1.node(3).fcr_pmax == 0.001);
    CHECK(s1.node(2).beta == 2.0);
    CHECK(s1.node(3).beta == 3.0);
    CHECK(s1.node(1).inertia == 0.01);
    CHECK(s1.node(1).bess_tau == 0.1);
    CHECK(s1.node(4).kind == NodeKind::Sg);
    CHECK(s1.node(4).inertia == 4.0);
    CHECK(s1.node(4).inertia_after_trip == 0.005);
    CHECK(s1.node(4).r_ibr == 0.05);
    CHECK(s1.node(4).governor_tau == 2.0);
    CHECK(s1.network.comm_delay == 0.5);
    CHECK(s1.estimator.kappa(0) == 20.0);
    CHECK(s1.estimator.kappa(1) == 100.0);
    CHECK(s1.topology().reactance(3, 4).value() == 0.02);
    REQUIRE(s1.events.size() == 3);
    CHECK(s1.events[2].target == 0.02);

    const auto s2 = preset("s2");
    CHECK(s2.stochastic.prbs.components == 8);
    CHECK(s2.stochastic.prbs.magnitude == 0.002);
    CHECK(s2.stochastic.prbs.switching_scale == 1e4);
    CHECK(s2.stochastic.bmr.sigma == 0.005);
    CHECK(s2.stochastic.bmr.reset_threshold == 0.02);
    CHECK(s2.stochastic.bmr.decay == 0.5);
    CHECK_THROWS_AS(preset("s3"), LookupError);
    try {
        preset("s3");
    } catch (const LookupError& e) {
        CHECK(std::string(e.what()).find("s2-no-support") != std::string::npos);
    }
}

TEST_CASE("empty document lists every missing section") {
    for (const std::string text : {"", "  \n", "{}"}) {
        const auto v = violations_of(text);
        CHECK(v.size() == 4);
        for (const char* section : {"/simulation", "/nodes", "/network", "/estimator"}) CHECK(mentions(v, section));
    }
}

TEST_CASE("unknown keys are reported with their location") {
    auto j = scenario_to_json(preset("s1"));
    j["nodes"][2]["H_typo"] = 0.1;
    j["simulation"]["stepsize"] = 1;
    const auto v = violations_of(j.dump());
    CHECK(mentions(v, "/nodes/2: unknown key 'H_typo'"));
    CHECK(mentions(v, "/simulation: unknown key 'stepsize'"));
}

TEST_CASE("semantic violations are collected together") {
    auto j = scenario_to_json(preset("s1"));
    j["network"]["electrical"][0]["X"] = -0.1;
    j["nodes"][0]["H"] = 0.0;
    j["events"][0]["node"] = 42;
    const auto v = violations_of(j.dump());
    CHECK(mentions(v, "reactance must be positive"));
    CHECK(mentions(v, "42"));
    CHECK(v.size() >= 3);
}

TEST_CASE("wrong types are reported") {
    auto j = scenario_to_json(preset("s1"));
    j["simulation"]["dt"] = "fast";
    CHECK(mentions(violations_of(j.dump()), "/simulation/dt"));
}

TEST_CASE("syntax errors carry line and column") {
    const std::string text = "{\n  \"name\": \"x\",\n  \"simulation\": {,\n}";
    try {
        parse_scenario(text);
        FAIL("expected a parse error");
    } catch (const ConfigParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 18);
        CHECK(std::string(e.what()).find("[json.exception") == std::string::npos);
    }
}

TEST_CASE("hash changes with content") {
    auto a = preset("s1");
    auto b = a;
    b.nodes[0].beta = 1.5;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(hex_digest(fnv1a64("")) == "cbf29ce484222325");
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);
}
