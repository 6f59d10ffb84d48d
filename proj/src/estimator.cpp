#include "dvpp/estimator.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "dvpp/errors.hpp"

namespace dvpp {

ExoModel ExoModel::constant() {
    return ExoModel{Eigen::MatrixXd::Zero(1, 1), Eigen::RowVectorXd::Ones(1)};
}

std::vector<std::string> ExoModel::violations() const {
    std::vector<std::string> out;
    if (a.rows() < 1 || a.rows() != a.cols()) out.emplace_back("exo model: A must be square with order >= 1");
    if (c.cols() != a.rows()) out.emplace_back("exo model: C must have as many columns as A has rows");
    if (!a.allFinite() || !c.allFinite()) out.emplace_back("exo model: entries must be finite");
    return out;
}

AugmentedModel build_augmented(const ExoModel& exo, double inertia) {
    if (!(inertia > 0.0) || !std::isfinite(inertia)) throw ParameterError("build_augmented: H must be positive");
    if (auto v = exo.violations(); !v.empty()) throw ParameterError(v.front());
    const Eigen::Index m = exo.order();
    AugmentedModel model;
    model.theta = 1.0 / (2.0 * inertia);
    model.a = Eigen::MatrixXd::Zero(m + 1, m + 1);
    model.a.block(0, 1, 1, m) = model.theta * exo.c;
    model.a.block(1, 1, m, m) = exo.a;
    model.b = Eigen::VectorXd::Zero(m + 1);
    model.b(0) = model.theta;
    model.c = Eigen::RowVectorXd::Zero(m + 1);
    model.c(0) = 1.0;
    model.exo_c = exo.c;
    return model;
}

static Eigen::MatrixXd closed_loop(const AugmentedModel& model, const Eigen::VectorXd& kappa) {
    if (kappa.size() != model.size())
        throw ParameterError("estimator gain has " + std::to_string(kappa.size()) + " entries, expected " +
                             std::to_string(model.size()));
    return model.a - kappa * model.c;
}

EstimatorGains certify_gain(const AugmentedModel& model, const Eigen::VectorXd& kappa) {
    const Eigen::MatrixXd a_cl = closed_loop(model, kappa);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a_cl, /*computeEigenvectors=*/false);
    EstimatorGains gains;
    gains.kappa = kappa;
    gains.margin = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const auto ev = solver.eigenvalues()(i);
        gains.eigenvalues.push_back(ev);
        gains.margin = std::max(gains.margin, ev.real());
    }
    gains.certified = gains.margin < 0.0;
    return gains;
}

LyapunovCertificate certify_gain_lyapunov(const AugmentedModel& model, const Eigen::VectorXd& kappa) {
    const Eigen::MatrixXd a_cl = closed_loop(model, kappa);
    const Eigen::Index n = a_cl.rows();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

    // vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P), column-major vec.
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            op.block(i * n, j * n, n, n) += eye(i, j) * a_cl.transpose();
            op.block(i * n, j * n, n, n) += a_cl(j, i) * eye;
        }
    }
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(eye.data(), n * n);

    LyapunovCertificate cert;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
    if (!lu.isInvertible()) return cert;
    cert.solvable = true;

    const Eigen::VectorXd vec_p = lu.solve(rhs);
    Eigen::MatrixXd p = Eigen::Map<const Eigen::MatrixXd>(vec_p.data(), n, n);
    p = 0.5 * (p + p.transpose());
    cert.residual = (a_cl.transpose() * p + p * a_cl + eye).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(p, Eigen::EigenvaluesOnly);
    cert.min_eigenvalue = sym.eigenvalues().minCoeff();
    cert.certified = cert.min_eigenvalue > 0.0;
    cert.p = std::move(p);
    return cert;
}

Eigen::VectorXd estimator_derivative(const Eigen::VectorXd& x_hat, double omega_meas, double u_m, double f,
                                     const AugmentedModel& model, const Eigen::VectorXd& kappa) {
    if (x_hat.size() != model.size() || kappa.size() != model.size())
        throw ParameterError("estimator dimensions do not match the augmented model");
    return model.a * x_hat + model.b * (-u_m + f) + kappa * (omega_meas - x_hat(0));
}

Eigen::VectorXd estimator_step(const Eigen::VectorXd& x_hat, double omega_meas, double u_m, double f,
                               const AugmentedModel& model, const Eigen::VectorXd& kappa, double dt) {
    Eigen::VectorXd next = x_hat + dt * estimator_derivative(x_hat, omega_meas, u_m, f, model, kappa);
    if (!next.allFinite()) throw NumericFault(0, "x_hat");
    return next;
}

double estimated_unmeasured_power(const Eigen::VectorXd& x_hat, const AugmentedModel& model) {
    return model.exo_c.dot(x_hat.tail(x_hat.size() - 1));
}

}  // namespace dvpp
