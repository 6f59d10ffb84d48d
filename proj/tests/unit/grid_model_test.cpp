#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dvpp/errors.hpp"
#include "dvpp/grid_model.hpp"

using namespace dvpp;

namespace {

GridTopology four_bus() {
    return GridTopology({1, 2, 3, 4},
                        {{1, 2, 0.1}, {2, 3, 0.1}, {3, 1, 0.1}, {3, 4, 0.02}},
                        {{1, 2, 1.0}, {2, 3, 1.0}}, 0.5);
}

}  // namespace

TEST_CASE("tie_line_flow reference values") {
    CHECK(tie_line_flow(0.0, 0.0, 0.1) == 0.0);
    CHECK(tie_line_flow(std::numbers::pi / 2, 0.0, 0.1) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(tie_line_flow(0.01, 0.0, 0.1) == doctest::Approx(10.0 * std::sin(0.01)).epsilon(1e-12));
}

TEST_CASE("tie_line_flow rejects bad reactance and non-finite phases") {
    CHECK_THROWS_AS(tie_line_flow(0.0, 0.0, 0.0), ParameterError);
    CHECK_THROWS_AS(tie_line_flow(0.0, 0.0, -0.1), ParameterError);
    CHECK_THROWS_AS(tie_line_flow(NAN, 0.0, 0.1), ParameterError);
    CHECK_THROWS_AS(tie_line_flow(0.0, INFINITY, 0.1), ParameterError);
}

TEST_CASE("tie_line_flow is antisymmetric and 2pi periodic") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ang(-4.0, 4.0), x(0.01, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = ang(gen), b = ang(gen), r = x(gen);
        CHECK(tie_line_flow(a, b, r) == -tie_line_flow(b, a, r));
        CHECK(tie_line_flow(a + 2 * std::numbers::pi, b, r) == doctest::Approx(tie_line_flow(a, b, r)).epsilon(1e-9));
    }
}

TEST_CASE("net injection on the 4-bus grid") {
    const auto topo = four_bus();
    const std::vector<double> theta{0.001, 0.0, 0.0, 0.0};
    // node 1 exports over (1,2) and (3,1)
    const double expected = 2.0 * std::sin(0.001) / 0.1;
    CHECK(net_tie_line_injection(1, theta, topo) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.0199999).epsilon(1e-6));
    CHECK(net_tie_line_injection(4, theta, topo) == 0.0);
    CHECK(net_tie_line_injection(2, theta, topo) == doctest::Approx(-std::sin(0.001) / 0.1));
}

TEST_CASE("lossless network: injections sum to zero") {
    const auto topo = four_bus();
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ang(-0.5, 0.5);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> theta(4);
        for (auto& t : theta) t = ang(gen);
        double sum = 0.0;
        for (double p : net_tie_line_injections(theta, topo)) sum += p;
        CHECK(std::abs(sum) <= 1e-12);
    }
}

TEST_CASE("topology construction errors") {
    CHECK_THROWS_AS(GridTopology({1, 2}, {{1, 2, -0.1}}, {}, 0.5), ParameterError);
    CHECK_THROWS_AS(GridTopology({1, 2}, {{1, 2, 0.0}}, {}, 0.5), ParameterError);
    CHECK_THROWS_AS(GridTopology({1, 2}, {{1, 1, 0.1}}, {}, 0.5), ParameterError);
    CHECK_THROWS_AS(GridTopology({1, 2}, {{1, 2, 0.1}, {2, 1, 0.2}}, {}, 0.5), ParameterError);
    CHECK_THROWS_AS(GridTopology({1, 2}, {{1, 5, 0.1}}, {}, 0.5), LookupError);
    CHECK_THROWS_AS(GridTopology({1, 2}, {}, {{1, 2, -1.0}}, 0.5), ParameterError);
    CHECK_THROWS_AS(GridTopology({1, 2}, {}, {}, -0.1), ParameterError);
    CHECK_THROWS_AS(GridTopology({1, 1}, {}, {}, 0.5), ParameterError);

    try {
        GridTopology({1, 2}, {{1, 2, -0.1}}, {}, 0.5);
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("reactance must be positive") != std::string::npos);
    }
}

TEST_CASE("topology lookups") {
    const auto topo = four_bus();
    CHECK(topo.size() == 4);
    CHECK(topo.index_of(3) == 2);
    CHECK_THROWS_AS(topo.index_of(9), LookupError);
    CHECK(topo.reactance(1, 3).value() == 0.1);
    CHECK(topo.reactance(4, 3).value() == 0.02);
    CHECK_FALSE(topo.reactance(1, 4).has_value());
    CHECK(topo.comm_weight(2, 1) == 1.0);
    CHECK(topo.comm_weight(1, 3) == 0.0);
    CHECK(topo.electrical_neighbors(2).size() == 3);
    CHECK(topo.comm_neighbors(1).size() == 2);
    CHECK_THROWS_AS(net_tie_line_injection(1, std::vector<double>{0.0, 0.0}, topo), ParameterError);
}

TEST_CASE("node parameter validation") {
    NodeParams p;
    p.id = 1;
    p.inertia = 0.01;
    p.bess_min = -0.02;
    p.bess_max = 0.02;
    CHECK(validate(p).empty());

    p.inertia = 0.0;
    p.bess_tau = -1.0;
    p.beta = 0.0;
    CHECK(validate(p).size() >= 3);

    NodeParams sg;
    sg.id = 4;
    sg.kind = NodeKind::Sg;
    sg.inertia = 4.0;
    CHECK(validate(sg).empty());
    sg.governor_tau = 0.0;
    CHECK_FALSE(validate(sg).empty());
}
