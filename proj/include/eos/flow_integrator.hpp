#pragma once

#include <Eigen/Core>
#include <functional>

#include "eos/types.hpp"

namespace eos::flow_integrator {

/// Black-box smooth loss. `hvp` may be empty; the eigenvalue estimator then
/// falls back to central-difference Hessian-vector products on `gradient`.
struct LossOracle {
    int dimension = 0;
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> hvp;
};

enum class FlowStatus { success, timeout, failed };

struct FlowResult {
    Eigen::VectorXd terminal;
    double terminal_loss = 0.0;
    long steps = 0;
    double top_eigenvalue = 0.0;
    FlowStatus status = FlowStatus::failed;
};

struct FlowParams {
    double loss_threshold = 1e-5;
    long max_steps = 2000000;
    int refresh_every = 100;  // eigenvalue/step-size refresh cadence
    double dt_min = 1e-6;
    double dt_max = 1e2;
    /// Step size = step_scale / lambda_max. 1.0 is the cheap default; the
    /// oracle-grade runs use ~0.05 to hold invariants to ~1e-8.
    double step_scale = 1.0;
};

/// Classic RK4 on dw/dt = -grad L(w). Steps that fail to decrease the loss
/// (beyond 1e-12) are rejected and retried at half the step.
FlowResult rk4_flow(const LossOracle& oracle, const Eigen::VectorXd& w0,
                    const FlowParams& params = {});

struct EigParams {
    double tol = 1e-10;
    int max_iters = 20000;
};

/// Largest signed eigenvalue of the Hessian at w via shifted power iteration
/// on Hessian-vector products: estimate the spectral radius rho, iterate on
/// H + rho*I, subtract rho. Throws SolverError (carrying the best estimate)
/// on non-convergence.
double top_eigenvalue(const LossOracle& oracle, const Eigen::VectorXd& w,
                      const EigParams& params = {});

/// Oracle adapters.
LossOracle scalar_net_oracle(int depth);

}  // namespace eos::flow_integrator
