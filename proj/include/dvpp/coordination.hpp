#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dvpp/grid_model.hpp"

namespace dvpp {

// Local compensation setpoint: -P_e + P_hat + P_res.
double local_setpoint(double p_e, double p_hat_unmeasured, double p_res);

// Remaining local imbalance after the BESS: -P_e + P_hat + P_res - u_m.
double dapi_mismatch(double p_e, double p_hat_unmeasured, double p_res, double u_m);

// Local setpoint plus the distributed correction. Not saturated; the BESS limits act downstream.
double final_setpoint(double u_delta, double p_e, double p_hat_unmeasured, double p_res);

struct DelayedNeighbor {
    double u_delta;  // neighbour integrator value as received (T^d old)
    double beta;
    double weight;
};

// sum_j w_ij (u_i / beta_i - u_j / beta_j)
double consensus_term(double u_delta_self, double beta_self, std::span<const DelayedNeighbor> neighbors);

// -alpha_i [mismatch + consensus_term]
double dapi_derivative(const NodeParams& params, double mismatch, double u_delta_self,
                       std::span<const DelayedNeighbor> neighbors);

// Number of samples a value must be held for a delay of `delay` seconds at step `dt`.
std::size_t delay_steps(double delay, double dt);

// Fixed-length FIFO modelling a link with a constant transport delay of `delay_steps` samples.
// read() returns the sample pushed delay_steps pushes before the most recent one (zero until then).
class DelayLine {
public:
    explicit DelayLine(std::size_t delay_steps) : buf_(delay_steps + 1, 0.0) {}

    void push(double value) {
        head_ = (head_ + 1) % buf_.size();
        buf_[head_] = value;
    }
    double read() const { return buf_[(head_ + 1) % buf_.size()]; }
    std::size_t delay() const noexcept { return buf_.size() - 1; }

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
};

}  // namespace dvpp
