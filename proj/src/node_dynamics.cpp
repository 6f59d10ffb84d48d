#include "dvpp/node_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "dvpp/errors.hpp"

namespace dvpp {

FcrParams FcrParams::from_capacity(double fcr_pmax, double omega_n, bool literal_branch) {
    if (!(omega_n > 0.0) || !std::isfinite(omega_n)) throw ParameterError("FCR band omega_n must be positive");
    if (!(fcr_pmax >= 0.0) || !std::isfinite(fcr_pmax)) throw ParameterError("fcr_pmax must be non-negative");
    return FcrParams{omega_n, fcr_pmax / omega_n, fcr_pmax, literal_branch};
}

double fcr_response(double omega, const FcrParams& params) {
    if (!std::isfinite(omega)) throw ParameterError("fcr_response: non-finite frequency");
    if (std::abs(omega) <= params.omega_n) return params.k_n * omega;
    if (params.literal_branch) return params.fcr_pmax * omega;
    return std::copysign(params.fcr_pmax, omega);
}

double bess_derivative(double u_m, double u_star, const NodeParams& params) {
    if (params.kind != NodeKind::Dvpp) throw KindError("bess_derivative called on a non-DVPP node");
    const double drive = (u_star - u_m) / params.bess_tau;
    if (u_m >= params.bess_max && drive > 0.0) return 0.0;
    if (u_m <= params.bess_min && drive < 0.0) return 0.0;
    return drive;
}

DvppDerivatives dvpp_derivatives(const NodeState& state, const DvppInputs& in, const NodeParams& params,
                                 const FcrParams& fcr) {
    if (params.kind != NodeKind::Dvpp) throw KindError("dvpp_derivatives called on a non-DVPP node");
    const double p_fcr = fcr_response(state.omega, fcr);
    const double imbalance = -in.p_e + in.p_unmeasured + in.p_res - p_fcr - state.u_m - in.tie_injection;
    return DvppDerivatives{
        .dtheta = state.omega,
        .domega = imbalance / (2.0 * params.inertia),
        .du_m = bess_derivative(state.u_m, in.u_star, params),
        .p_fcr = p_fcr,
        .imbalance = imbalance,
    };
}

SgDerivatives sg_derivatives(const NodeState& state, double p_e, double tie_injection, const NodeParams& params,
                             bool tripped) {
    if (params.kind != NodeKind::Sg) throw KindError("sg_derivatives called on a non-SG node");
    const double h = tripped ? params.inertia_after_trip : params.inertia;
    const double imbalance = state.p_m - p_e - tie_injection;
    const double governor_ref = tripped ? 0.0 : -state.omega / params.r_sg;
    return SgDerivatives{
        .dtheta = state.omega,
        .domega = (imbalance - state.omega / params.r_ibr) / (2.0 * h),
        .dp_m = (governor_ref - state.p_m) / params.governor_tau,
    };
}

}  // namespace dvpp
