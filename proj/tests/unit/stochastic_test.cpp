#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "dvpp/errors.hpp"
#include "dvpp/stochastic.hpp"

using namespace dvpp;

TEST_CASE("PRBS amplitudes and flip probabilities") {
    CHECK(prbs_amplitude(1, 0.002) == 0.002);
    CHECK(prbs_amplitude(2, 0.002) == 0.001);
    CHECK(prbs_amplitude(5, 0.002) == doctest::Approx(0.00025));
    CHECK(prbs_flip_probability(3, 1e4) == doctest::Approx(3e-4));
    CHECK_THROWS_AS(prbs_amplitude(0, 0.002), ParameterError);
}

TEST_CASE("PRBS initial output is the sum of amplitudes") {
    PrbsGenerator one({1, 0.002, 1e4}, RandomStream(1));
    CHECK(one.value() == 0.002);

    PrbsGenerator eight({8, 0.002, 1e4}, RandomStream(1));
    double expected = 0.0;
    for (int k = 1; k <= 8; ++k) expected += prbs_amplitude(k, 0.002);
    CHECK(eight.value() == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("zero flip probability holds the output") {
    std::vector<int> signs{1, -1, 1};
    const std::vector<double> amps{0.002, 0.001, 0.0005};
    const std::vector<double> probs{0.0, 0.0, 0.0};
    RandomStream rng(9);
    const double first = prbs_step(signs, amps, probs, rng);
    for (int i = 0; i < 10000; ++i) CHECK(prbs_step(signs, amps, probs, rng) == first);
    CHECK(signs == std::vector<int>{1, -1, 1});
}

TEST_CASE("PRBS outputs stay in the reachable set") {
    const PrbsConfig cfg{8, 0.002, 1e4};
    PrbsGenerator gen(cfg, RandomStream::substream(3, 1, "load"));
    std::set<double> reachable;
    for (unsigned mask = 0; mask < (1u << cfg.components); ++mask) {
        double sum = 0.0;
        for (int k = 0; k < cfg.components; ++k) sum += ((mask >> k) & 1u ? -1 : 1) * gen.amplitudes()[k];
        reachable.insert(sum);
    }
    for (int i = 0; i < 200000; ++i) REQUIRE(reachable.count(gen.step()) == 1);
}

TEST_CASE("PRBS flip rates match k / s_f") {
    const PrbsConfig cfg{8, 0.002, 1e4};
    PrbsGenerator gen(cfg, RandomStream(42));
    const int steps = 400000;
    std::vector<int> flips(cfg.components, 0);
    auto prev = gen.signs();
    for (int i = 0; i < steps; ++i) {
        gen.step();
        for (int k = 0; k < cfg.components; ++k) flips[k] += gen.signs()[k] != prev[k];
        prev = gen.signs();
    }
    for (int k = 0; k < cfg.components; ++k) {
        const double p = (k + 1) / cfg.switching_scale;
        const double se = std::sqrt(p * (1 - p) / steps);
        CHECK(std::abs(double(flips[k]) / steps - p) < 3.5 * se);
    }
}

TEST_CASE("BMR soft reset") {
    BmrConfig cfg;
    CHECK(bmr_output(0.03, cfg) == doctest::Approx(0.015));
    CHECK(bmr_output(-0.03, cfg) == doctest::Approx(-0.015));
    CHECK(bmr_output(0.01, cfg) == 0.01);
    CHECK(bmr_output(0.02, cfg) == 0.02);

    cfg.sigma = 0.0;
    RandomStream rng(1);
    const auto s = bmr_step(0.0, cfg, rng);
    CHECK(s.walk == 0.0);
    CHECK(s.output == 0.0);
}

TEST_CASE("BMR reset write-back option") {
    BmrConfig cfg;
    cfg.sigma = 0.0;
    RandomStream rng(1);
    auto literal = bmr_step(0.03, cfg, rng);
    CHECK(literal.walk == 0.03);
    CHECK(literal.output == doctest::Approx(0.015));

    cfg.reset_state = true;
    auto reset = bmr_step(0.03, cfg, rng);
    CHECK(reset.walk == doctest::Approx(0.015));
    CHECK(reset.output == reset.walk);
}

TEST_CASE("BMR increments have variance sigma^2 dt") {
    BmrConfig cfg;
    cfg.reset_threshold = 1e9;
    RandomStream rng(17);
    const int n = 200000;
    double sum = 0.0, sq = 0.0, walk = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto s = bmr_step(walk, cfg, rng);
        const double inc = s.walk - walk;
        sum += inc;
        sq += inc * inc;
        walk = s.walk;
    }
    const double var = sq / n - (sum / n) * (sum / n);
    CHECK(var == doctest::Approx(cfg.sigma * cfg.sigma * cfg.dt).epsilon(0.02));
}

TEST_CASE("random streams are reproducible and independent per tag") {
    auto a = RandomStream::substream(5, 1, "load");
    auto b = RandomStream::substream(5, 1, "load");
    auto c = RandomStream::substream(5, 1, "res");
    auto d = RandomStream::substream(5, 2, "load");
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        differs_c |= x != c.uniform();
        differs_d |= x != d.uniform();
    }
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("normal sampler moments") {
    RandomStream rng(123);
    const int n = 400000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("config violations") {
    CHECK(PrbsConfig{}.violations().empty());
    CHECK_FALSE(PrbsConfig{0, 0.002, 1e4}.violations().empty());
    CHECK_FALSE(PrbsConfig{8, -1.0, 1e4}.violations().empty());
    CHECK_FALSE(PrbsConfig{8, 0.002, 4.0}.violations().empty());
    CHECK_THROWS_AS(PrbsGenerator(PrbsConfig{0, 0.002, 1e4}, RandomStream(1)), ValidationError);

    BmrConfig b;
    CHECK(b.violations().empty());
    b.decay = 1.5;
    b.sigma = -1;
    CHECK(b.violations().size() == 2);
}
