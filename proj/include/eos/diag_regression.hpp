#pragma once

#include <Eigen/Core>

#include "eos/flow_integrator.hpp"
#include "eos/rng.hpp"

namespace eos::diag_regression {

/// Squared regression instance: predictor <u_+^2 - u_-^2, x> with
/// theta = [u_+; u_-] in R^{2d}, MSE loss over (X, y), and the reference
/// initialization w0 (element-wise nonzero) that fixes the implicit bias.
struct RegressionProblem {
    Eigen::MatrixXd X;   // N x d, full row rank, N <= d
    Eigen::VectorXd y;   // N
    Eigen::VectorXd w0;  // 2d

    int d() const { return static_cast<int>(X.cols()); }
    int n() const { return static_cast<int>(X.rows()); }
};

struct GfsBeta {
    Eigen::VectorXd beta;  // d
    Eigen::VectorXd dual;  // N
    double kkt_residual = 0.0;
};

struct LossGradHess {
    double loss = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

Eigen::VectorXd beta_of_theta(const Eigen::VectorXd& theta);

/// MSE loss, exact gradient, and exact Hessian (Gram term plus residual
/// diagonal) at theta.
LossGradHess model_loss_grad_hess(const RegressionProblem& p, const Eigen::VectorXd& theta);
double model_loss(const RegressionProblem& p, const Eigen::VectorXd& theta);
Eigen::VectorXd model_gradient(const RegressionProblem& p, const Eigen::VectorXd& theta);

/// One full-batch GD step on theta.
Eigen::VectorXd theta_gd_step(const RegressionProblem& p, const Eigen::VectorXd& theta,
                              double eta);

/// Linear predictor selected by gradient flow from w0: the minimizer of the
/// hyperbolic-entropy potential subject to X beta = y, solved in the dual.
/// The sinh link gives beta(nu) explicitly, leaving a damped Newton solve of
/// X beta(nu) = y in N unknowns. `nu0` warm-starts the dual.
GfsBeta gfs_beta(const RegressionProblem& p, const Eigen::VectorXd* nu0 = nullptr);

/// |S_GF| as squares: recovers (u_+^2, u_-^2) from beta via the conserved
/// products u_+ u_- = |u_{+,0} u_{-,0}|; returns nonnegative theta.
Eigen::VectorXd theta_from_beta(const RegressionProblem& p, const Eigen::VectorXd& beta);

/// Sharpness at an interpolating theta: top eigenvalue of the Gram-form
/// Hessian, computed on the N x N side.
double interpolating_sharpness(const RegressionProblem& p, const Eigen::VectorXd& theta);

/// GFS sharpness of the GF trajectory through w (treated as the trajectory's
/// initialization).
double gfs_sharpness_regression(const RegressionProblem& p, const Eigen::VectorXd& w);

/// Approximate min over interpolating theta of the sharpness: projected
/// subgradient on beta with the magnitude-minimal lift theta^2 = |beta|.
/// Best value seen; used to pick the edge-of-stability step sizes.
double flattest_sharpness(const RegressionProblem& p, int iters, Rng& rng);

/// Synthetic instance: rows x_n ~ Normal(5*1_d, 5*I), labels ~ Normal(0,1),
/// w0 ~ Normal(0, init_scale^2) resampled away from zero.
RegressionProblem make_synthetic(int d, int n, double init_scale, Rng& rng);

/// Loss oracle over theta for the generic flow integrator.
flow_integrator::LossOracle regression_oracle(const RegressionProblem& p);

}  // namespace eos::diag_regression
