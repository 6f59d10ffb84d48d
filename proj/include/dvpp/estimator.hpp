#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dvpp {

// Linear exo-system generating the unmeasured power: zeta' = A zeta, P = C zeta.
struct ExoModel {
    Eigen::MatrixXd a;
    Eigen::RowVectorXd c;

    // Constant disturbance: A = 0, C = 1.
    static ExoModel constant();

    Eigen::Index order() const noexcept { return a.rows(); }
    std::vector<std::string> violations() const;
};

// Frequency state augmented with the exo-system state, x = [omega; zeta].
struct AugmentedModel {
    Eigen::MatrixXd a;      // [[0, theta*C], [0, A]]
    Eigen::VectorXd b;      // [theta; 0]
    Eigen::RowVectorXd c;   // [1, 0 ... 0]
    Eigen::RowVectorXd exo_c;
    double theta = 0.0;     // 1 / (2H)

    Eigen::Index size() const noexcept { return a.rows(); }
};

AugmentedModel build_augmented(const ExoModel& exo, double inertia);

struct EstimatorGains {
    Eigen::VectorXd kappa;
    bool certified = false;
    double margin = 0.0;  // max real part of eig(A - kappa C); certified iff negative
    std::vector<std::complex<double>> eigenvalues;
};

// Eigenvalue test of the estimation-error matrix A - kappa C.
EstimatorGains certify_gain(const AugmentedModel& model, const Eigen::VectorXd& kappa);

struct LyapunovCertificate {
    bool solvable = false;  // Lyapunov operator invertible
    bool certified = false; // P symmetric positive definite
    Eigen::MatrixXd p;
    double min_eigenvalue = 0.0;
    double residual = 0.0;  // ||A_cl^T P + P A_cl + Q||_inf
};

// Solves A_cl^T P + P A_cl = -I via the Kronecker form and tests P > 0.
LyapunovCertificate certify_gain_lyapunov(const AugmentedModel& model, const Eigen::VectorXd& kappa);

// d/dt x_hat = A x_hat + B(-u_m + f) + kappa (omega - omega_hat)
Eigen::VectorXd estimator_derivative(const Eigen::VectorXd& x_hat, double omega_meas, double u_m, double f,
                                     const AugmentedModel& model, const Eigen::VectorXd& kappa);

// One forward-Euler step of the estimator.
Eigen::VectorXd estimator_step(const Eigen::VectorXd& x_hat, double omega_meas, double u_m, double f,
                               const AugmentedModel& model, const Eigen::VectorXd& kappa, double dt);

inline double estimated_frequency(const Eigen::VectorXd& x_hat) { return x_hat(0); }
double estimated_unmeasured_power(const Eigen::VectorXd& x_hat, const AugmentedModel& model);

}  // namespace dvpp
