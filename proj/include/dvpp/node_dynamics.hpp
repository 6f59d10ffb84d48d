#pragma once

#include <numbers>

#include <Eigen/Dense>

#include "dvpp/grid_model.hpp"

namespace dvpp {

// FCR-N band edge in p.u. frequency deviation.
inline constexpr double kDefaultFcrBand = 0.2 * std::numbers::pi / 50.0;

struct NodeState {
    double theta = 0.0;    // rad
    double omega = 0.0;    // frequency deviation, p.u.
    double u_m = 0.0;      // measured BESS consumption, p.u.
    double u_delta = 0.0;  // DAPI integrator, p.u.
    double p_m = 0.0;      // SG mechanical power, p.u.
    Eigen::VectorXd x_hat; // estimator state [omega_hat; zeta_hat], DVPP only
};

struct DvppInputs {
    double p_e = 0.0;            // electrical load
    double p_unmeasured = 0.0;   // true unmeasured injection
    double p_res = 0.0;          // renewable injection
    double u_star = 0.0;         // BESS setpoint
    double tie_injection = 0.0;  // sum of tie-line flows out of the node
};

struct FcrParams {
    double omega_n = kDefaultFcrBand;
    double k_n = 0.0;
    double fcr_pmax = 0.0;
    // Use P_max * omega outside the band instead of saturating at +-P_max.
    bool literal_branch = false;

    static FcrParams from_capacity(double fcr_pmax, double omega_n = kDefaultFcrBand, bool literal_branch = false);
};

double fcr_response(double omega, const FcrParams& params);

// Rate of change of the measured BESS power. Holds at a limit when the drive pushes outward.
double bess_derivative(double u_m, double u_star, const NodeParams& params);

struct DvppDerivatives {
    double dtheta;
    double domega;
    double du_m;
    double p_fcr;      // FCR response used in the imbalance
    double imbalance;  // net power imbalance delta_P
};

DvppDerivatives dvpp_derivatives(const NodeState& state, const DvppInputs& inputs, const NodeParams& params,
                                 const FcrParams& fcr);

struct SgDerivatives {
    double dtheta;
    double domega;
    double dp_m;
};

// Swing + IBR droop + first-order governor. A tripped unit runs on its post-trip inertia
// and its governor reference is removed, so P_m decays to zero through T_g.
SgDerivatives sg_derivatives(const NodeState& state, double p_e, double tie_injection, const NodeParams& params,
                             bool tripped);

}  // namespace dvpp
