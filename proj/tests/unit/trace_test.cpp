#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "dvpp/errors.hpp"
#include "dvpp/metrics.hpp"
#include "dvpp/trace_io.hpp"

using namespace dvpp;

namespace {

SimulationTrace awkward_trace() {
    TraceHeader h;
    h.scenario = "t";
    h.dt = 0.5;
    h.nodes = {1};
    h.node_kinds = {NodeKind::Dvpp};
    SimulationTrace tr(h, {"t", "n1.omega", "mean_omega"});
    const double odd[] = {1.0 / 3.0, -0.0, 5e-324, 1.7976931348623157e308, -2.2250738585072014e-308, 0.1, 1e-17};
    std::mt19937_64 gen(1);
    for (int r = 0; r < 20; ++r) {
        double bits;
        const auto raw = gen();
        std::memcpy(&bits, &raw, sizeof bits);
        if (!std::isfinite(bits)) bits = 1.0;
        const double row[] = {0.5 * r, odd[r % 7], bits};
        tr.append_row(row);
    }
    return tr;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("CSV and binary traces round-trip bit-exactly") {
    const auto tr = awkward_trace();
    const auto csv = trace_from_csv(trace_to_csv(tr), tr.header());
    const auto bin = trace_from_binary(trace_to_binary(tr), tr.header());
    CHECK(csv.columns() == tr.columns());
    CHECK(bin.columns() == tr.columns());
    CHECK(bit_equal(csv.values(), tr.values()));
    CHECK(bit_equal(bin.values(), tr.values()));
    CHECK(trace_digest(csv) == trace_digest(tr));
}

TEST_CASE("header round-trips through JSON") {
    auto h = awkward_trace().header();
    h.seed = 18446744073709551615ULL;
    h.config_hash = "00ff";
    const auto back = header_from_json(header_to_json(h));
    CHECK(back.seed == h.seed);
    CHECK(back.dt == h.dt);
    CHECK(back.nodes == h.nodes);
    CHECK(back.node_kinds == h.node_kinds);
    CHECK(back.config_hash == "00ff");
}

TEST_CASE("malformed trace input") {
    CHECK_THROWS_AS(trace_from_binary("NOTATRACE"), IoError);
    auto bin = trace_to_binary(awkward_trace());
    CHECK_THROWS_AS(trace_from_binary(bin.substr(0, bin.size() - 3)), IoError);
    CHECK_THROWS_AS(trace_from_binary(bin + "x"), IoError);
    CHECK_THROWS_AS(trace_from_csv("t,a\n1,2,3\n"), IoError);
    CHECK_THROWS_AS(trace_from_csv("t,a\n1\n"), IoError);
    CHECK_THROWS_AS(trace_from_csv("t,a\n1,zz\n"), IoError);
    CHECK_THROWS_AS(trace_from_csv(""), IoError);
}

TEST_CASE("trace access and decimation") {
    const auto tr = awkward_trace();
    CHECK(tr.rows() == 20);
    CHECK_THROWS_AS(tr.column_index("nope"), LookupError);
    const auto d = tr.decimated(3);
    CHECK(d.rows() == 7);
    CHECK(d.at(2, "t") == 3.0);
    CHECK(d.header().decimation == 3);
    CHECK_THROWS_AS(tr.decimated(0), ParameterError);
    SimulationTrace copy(tr.header(), tr.columns());
    const double short_row[] = {1.0};
    CHECK_THROWS_AS(copy.append_row(short_row), ParameterError);
}

TEST_CASE("forward difference") {
    const std::vector<double> t{0.0, 0.5, 1.0, 1.5};
    const std::vector<double> v{0.0, 1.0, 4.0, 9.0};
    const auto d = forward_difference(v, t);
    REQUIRE(d.size() == 4);
    CHECK(d[0] == 2.0);
    CHECK(d[1] == 6.0);
    CHECK(d[2] == 10.0);
    CHECK(d[3] == 10.0);
}

TEST_CASE("RMS RoCoF over a window of a linear ramp") {
    TraceHeader h;
    h.nodes = {1, 2};
    h.node_kinds = {NodeKind::Dvpp, NodeKind::Dvpp};
    std::vector<std::string> cols{"t"};
    for (NodeId id : h.nodes)
        for (const char* s : kNodeSignals) cols.push_back(node_column(id, s));
    cols.emplace_back("mean_omega");
    SimulationTrace tr(h, cols);
    for (int r = 0; r <= 100; ++r) {
        std::vector<double> row(cols.size(), 0.0);
        const double t = 0.01 * r;
        row[0] = t;
        row[tr.column_index("n1.omega")] = 0.002 * t;
        row[tr.column_index("n2.omega")] = 0.004 * t;
        row[tr.column_index("n1.h")] = 1.0;
        row[tr.column_index("n2.h")] = 3.0;
        row.back() = 0.003 * t;
        tr.append_row(row);
    }
    MetricsOptions opt;
    opt.window_start = 0.2;
    opt.window_end = 0.8;
    auto m = derived_metrics(tr, opt);
    CHECK(m.rms_mean_rocof == doctest::Approx(0.003));
    CHECK(m.nodes.size() == 2);
    CHECK(m.nodes[1].omega == doctest::Approx(0.004));

    // weighted by inertia: (1 * 0.002 + 3 * 0.004) / 4
    opt.inertia_weighted = true;
    m = derived_metrics(tr, opt);
    CHECK(m.rms_mean_rocof == doctest::Approx(0.0035));

    CHECK_THROWS_AS(derived_metrics(SimulationTrace(h, cols)), ParameterError);
}
