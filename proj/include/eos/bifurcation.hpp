#pragma once

#include <vector>

#include "eos/dynamics.hpp"
#include "eos/gf_exact.hpp"

namespace eos::bifurcation {

/// Period value standing for "no period up to max_period detected".
inline constexpr int kChaotic = 0;

struct PeriodicParams {
    long burn_in = 200000;
    long tail = 1000;
    int max_period = 512;
    double period_tol = 1e-8;       // absolute, products are O(1)
    double divergence_bound = 1e8;
};

struct BifurcationSample {
    double gfs_sharpness = 0.0;
    double x0 = 0.0;
    /// The detected orbit (period values), or the whole tail when chaotic.
    std::vector<double> periodic_products;
    int period = kChaotic;
    bool near_doubling = false;  // within 1% of a detected period change
    bool diverged = false;
};

/// Iterates q_eta for burn_in steps from x0 on the trajectory fixed by sig,
/// keeps the final `tail` values, and classifies the smallest period
/// p <= max_period with |x_{k+p} - x_k| < period_tol across the tail.
/// Throws DivergedError if the iterate leaves (0, divergence_bound).
BifurcationSample periodic_set(const gf_exact::BalanceSignature& sig, double eta, double x0,
                               const PeriodicParams& params);

/// One periodic_set per weight-carrying trajectory record (x0 = its product),
/// chains batched four at a time through the SIMD kernels. Divergence marks
/// the sample instead of aborting; samples near a period change are flagged.
std::vector<BifurcationSample> diagram_along_trajectory(const dynamics::Trajectory& traj,
                                                        const PeriodicParams& params);

/// Smallest period in the tail, or kChaotic.
int classify_period(std::span<const double> tail, int max_period, double tol);

}  // namespace eos::bifurcation
