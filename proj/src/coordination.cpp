#include "dvpp/coordination.hpp"

#include <cmath>

#include "dvpp/errors.hpp"

namespace dvpp {

double local_setpoint(double p_e, double p_hat_unmeasured, double p_res) {
    return -p_e + p_hat_unmeasured + p_res;
}

double dapi_mismatch(double p_e, double p_hat_unmeasured, double p_res, double u_m) {
    return -p_e + p_hat_unmeasured + p_res - u_m;
}

double final_setpoint(double u_delta, double p_e, double p_hat_unmeasured, double p_res) {
    return u_delta + local_setpoint(p_e, p_hat_unmeasured, p_res);
}

double consensus_term(double u_delta_self, double beta_self, std::span<const DelayedNeighbor> neighbors) {
    if (!(beta_self > 0.0)) throw ParameterError("DAPI scaling factor beta must be positive");
    const double self = u_delta_self / beta_self;
    double sum = 0.0;
    for (const auto& nb : neighbors) {
        if (!(nb.beta > 0.0)) throw ParameterError("DAPI scaling factor beta must be positive");
        sum += nb.weight * (self - nb.u_delta / nb.beta);
    }
    return sum;
}

double dapi_derivative(const NodeParams& params, double mismatch, double u_delta_self,
                       std::span<const DelayedNeighbor> neighbors) {
    if (params.kind != NodeKind::Dvpp) throw KindError("DAPI runs on DVPP nodes only");
    return -params.alpha * (mismatch + consensus_term(u_delta_self, params.beta, neighbors));
}

std::size_t delay_steps(double delay, double dt) {
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    if (!(delay >= 0.0)) throw ParameterError("delay must be non-negative");
    // Tolerate representation error so that e.g. 0.5 / 5e-4 gives exactly 1000.
    const double ratio = delay / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace dvpp
