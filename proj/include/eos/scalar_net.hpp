#pragma once

#include <Eigen/Core>

#include "eos/types.hpp"

namespace eos::scalar_net {

/// Quadratic product loss 0.5 * (pi(w) - 1)^2.
double loss(const WeightVector& w);

/// Exact gradient, assembled from leave-one-out products so zero
/// coordinates need no special casing: grad_i = (pi - 1) * prod_{j != i} w_j.
Eigen::VectorXd gradient(const WeightVector& w);

/// Exact symmetric Hessian: outer(p1, p1) + (pi - 1) * P2, where p1 holds the
/// leave-one-out products and P2 the leave-two-out products (zero diagonal).
Eigen::MatrixXd hessian(const WeightVector& w);

/// Largest (signed) eigenvalue of the Hessian, dense symmetric eigensolve.
double sharpness(const WeightVector& w);

/// s_m = e_{D-m}(w^2) for m = 0..D via the ascending coefficient recurrence
/// on the squared entries (all terms nonnegative, no cancellation).
SymmetricValues symmetric_values(const WeightVector& w);

/// s_1 evaluated on an arbitrary positive vector, pi^2(x) * ||x^{-1}||^2,
/// computed as e_{D-1}(x^2).
double s1(std::span<const double> x);

/// Leave-one-out products prod_{j != i} w_j for all i.
Eigen::VectorXd leave_one_out(const WeightVector& w);

}  // namespace eos::scalar_net
