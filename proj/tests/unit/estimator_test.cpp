#include <doctest.h>

#include <cmath>
#include <random>

#include "dvpp/errors.hpp"
#include "dvpp/estimator.hpp"

using namespace dvpp;

namespace {

const Eigen::VectorXd kReferenceGain = (Eigen::VectorXd(2) << 20.0, 100.0).finished();

struct LoopResult {
    double p_hat;
    double omega_err;
};

// Single bus driven by a constant unmeasured injection with the BESS following the estimate
// (u_m = P_hat). The estimator may assume a different inertia than the plant.
LoopResult run_loop(double h_plant, double h_est, double p_true, double horizon, double dt = 5e-4) {
    const auto model = build_augmented(ExoModel::constant(), h_est);
    Eigen::VectorXd x_hat = Eigen::VectorXd::Zero(2);
    double omega = 0.0;
    const int steps = static_cast<int>(std::lround(horizon / dt));
    for (int k = 0; k < steps; ++k) {
        const double u_m = estimated_unmeasured_power(x_hat, model);
        const double domega = (p_true - u_m) / (2.0 * h_plant);
        x_hat = estimator_step(x_hat, omega, u_m, 0.0, model, kReferenceGain, dt);
        omega += dt * domega;
    }
    return {estimated_unmeasured_power(x_hat, model), std::abs(estimated_frequency(x_hat) - omega)};
}

}  // namespace

TEST_CASE("augmented model structure") {
    auto m = build_augmented(ExoModel::constant(), 0.01);
    CHECK(m.theta == doctest::Approx(50.0));
    CHECK(m.a(0, 0) == 0.0);
    CHECK(m.a(0, 1) == doctest::Approx(50.0));
    CHECK(m.a(1, 0) == 0.0);
    CHECK(m.a(1, 1) == 0.0);
    CHECK(m.b(0) == doctest::Approx(50.0));
    CHECK(m.b(1) == 0.0);
    CHECK(m.c(0) == 1.0);
    CHECK(m.c(1) == 0.0);

    m = build_augmented(ExoModel::constant(), 0.1);
    CHECK(m.a(0, 1) == doctest::Approx(5.0));

    ExoModel ramp{(Eigen::MatrixXd(2, 2) << 0, 1, 0, 0).finished(), (Eigen::RowVectorXd(2) << 1, 0).finished()};
    m = build_augmented(ramp, 0.05);
    CHECK(m.size() == 3);
    CHECK(m.a(1, 2) == 1.0);
    CHECK(m.a(0, 1) == doctest::Approx(10.0));

    CHECK_THROWS_AS(build_augmented(ExoModel::constant(), 0.0), ParameterError);
    CHECK_THROWS_AS(build_augmented(ExoModel::constant(), -1.0), ParameterError);
    ExoModel bad{Eigen::MatrixXd::Zero(2, 2), Eigen::RowVectorXd::Ones(1)};
    CHECK_THROWS_AS(build_augmented(bad, 0.01), ParameterError);
}

TEST_CASE("certification of the reference gain") {
    auto g = certify_gain(build_augmented(ExoModel::constant(), 0.01), kReferenceGain);
    CHECK(g.certified);
    REQUIRE(g.eigenvalues.size() == 2);
    for (const auto& ev : g.eigenvalues) {
        CHECK(ev.real() == doctest::Approx(-10.0));
        CHECK(std::abs(ev.imag()) == doctest::Approx(70.0));
    }
    CHECK(certify_gain(build_augmented(ExoModel::constant(), 0.1), kReferenceGain).certified);
    CHECK_FALSE(certify_gain(build_augmented(ExoModel::constant(), 0.01), Eigen::VectorXd::Zero(2)).certified);
    CHECK_THROWS_AS(certify_gain(build_augmented(ExoModel::constant(), 0.01), Eigen::VectorXd::Zero(3)),
                    ParameterError);

    const auto lyap = certify_gain_lyapunov(build_augmented(ExoModel::constant(), 0.01), kReferenceGain);
    CHECK(lyap.certified);
    CHECK(lyap.residual < 1e-9);
    CHECK_FALSE(certify_gain_lyapunov(build_augmented(ExoModel::constant(), 0.01), Eigen::VectorXd::Zero(2)).certified);
}

TEST_CASE("eigenvalue and Lyapunov certificates agree; 2x2 case matches Routh-Hurwitz") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> gain(-50.0, 150.0), h(0.005, 0.5), entry(-2.0, 2.0);
    std::uniform_int_distribution<int> order(1, 3);
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
        const int m = order(gen);
        ExoModel exo{Eigen::MatrixXd::Zero(m, m), Eigen::RowVectorXd::Zero(m)};
        if (m > 1) {
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c) exo.a(r, c) = entry(gen);
        }
        for (int c = 0; c < m; ++c) exo.c(c) = entry(gen);
        const double inertia = h(gen);
        const auto model = build_augmented(exo, inertia);
        Eigen::VectorXd kappa(m + 1);
        for (int r = 0; r <= m; ++r) kappa(r) = gain(gen);

        const auto eig = certify_gain(model, kappa);
        if (std::abs(eig.margin) < 1e-6) continue;
        const auto lyap = certify_gain_lyapunov(model, kappa);
        CHECK(eig.certified == lyap.certified);
        ++compared;

        if (m == 1) {
            // s^2 + k1 s + theta c k2
            const bool hurwitz = kappa(0) > 0 && model.theta * exo.c(0) * kappa(1) > 0;
            CHECK(hurwitz == eig.certified);
        }
    }
    CHECK(compared >= 250);
}

TEST_CASE("estimator at rest stays at rest") {
    const auto model = build_augmented(ExoModel::constant(), 0.01);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    for (int k = 0; k < 1000; ++k) x = estimator_step(x, 0.0, 0.0, 0.0, model, kReferenceGain, 5e-4);
    CHECK(x.isZero(0.0));
}

TEST_CASE("estimate converges to a constant unmeasured power") {
    const auto r = run_loop(0.01, 0.01, 0.015, 2.0);
    CHECK(std::abs(r.p_hat - 0.015) < 1e-6);
    CHECK(r.omega_err < 1e-6);
}

TEST_CASE("zero steady-state error with a 20% inertia mismatch") {
    for (double h : {0.01, 0.05, 0.1}) {
        const auto r = run_loop(h, 1.2 * h, 0.015, 10.0);
        CHECK(std::abs(r.p_hat - 0.015) < 1e-6);
    }
}

TEST_CASE("estimation error does not depend on the known inputs") {
    const double h = 0.01, dt = 5e-4, p_true = 0.01;
    const auto model = build_augmented(ExoModel::constant(), h);
    auto error_trace = [&](double u_amp, double f_amp) {
        std::vector<double> err;
        Eigen::VectorXd x_hat = Eigen::VectorXd::Zero(2);
        double omega = 0.0;
        for (int k = 0; k < 4000; ++k) {
            const double t = k * dt;
            const double u = u_amp * std::sin(3 * t), f = f_amp * std::cos(5 * t);
            const double domega = (p_true - u + f) / (2 * h);
            x_hat = estimator_step(x_hat, omega, u, f, model, kReferenceGain, dt);
            omega += dt * domega;
            err.push_back(p_true - estimated_unmeasured_power(x_hat, model));
        }
        return err;
    };
    const auto a = error_trace(0.0, 0.0), b = error_trace(0.02, -0.01);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
}

TEST_CASE("non-finite estimator state raises a numeric fault") {
    const auto model = build_augmented(ExoModel::constant(), 0.01);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(estimator_step(x, NAN, 0.0, 0.0, model, kReferenceGain, 5e-4), NumericFault);
}
