#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "eos/gf_exact.hpp"
#include "eos/types.hpp"

namespace eos::dynamics {

/// One gradient-descent step w - eta * grad L(w) (zero-safe gradient).
WeightVector gd_step(const WeightVector& w, double eta);

/// Product after one GD step on the trajectory fixed by sig, evaluated as
/// x + sum_m eta^m (1-x)^m x^{m-1} s~_m(x). Equals pi(gd_step(w(x), eta))
/// up to roundoff. Requires x > 0.
double predicted_product_step(const gf_exact::BalanceSignature& sig, double x, double eta);

/// Pairwise balances b_ij = w_i^2 - w_j^2 after one GD step: each scales by
/// 1 - eta^2 (pi-1)^2 * t_ij where t_ij is the squared leave-two-out product
/// (the zero-coordinate limit of pi^2 / (w_i^2 w_j^2)).
Eigen::MatrixXd predicted_balance_step(const WeightVector& w, double eta);

/// GFS-preserving GD: the point on w's GF trajectory whose product equals
/// pi(gd_step(w, eta)). Throws SignError if either product is nonpositive.
WeightVector gpgd_step(const WeightVector& w, double eta);

enum class MapKind { gd, gpgd };
enum class RunStatus { running, converged, diverged, max_steps };

const char* to_string(RunStatus s);

struct RunParams {
    double eta = 0.1;
    long max_steps = 10000;
    double loss_threshold = 1e-10;
    double divergence_bound = 1e8;
    long record_every = 1;     // scalar log granularity
    long weights_every = 100;  // full weight snapshots (bounds memory)
};

struct TrajectoryRecord {
    long t = 0;
    double loss = 0.0;
    double sharpness = 0.0;
    double gfs_sharpness = 0.0;  // NaN when pi <= 0
    double product = 0.0;
    std::optional<WeightVector> w;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    double eta = 0.0;
    int depth = 0;
    RunStatus status = RunStatus::running;
    std::string status_reason;
};

/// Iterates the chosen map from w0. Records first and last iterates always,
/// scalars every record_every steps, weights every weights_every steps.
Trajectory run(MapKind map, const WeightVector& w0, const RunParams& params);

}  // namespace eos::dynamics
