#pragma once

#include "eos/gf_exact.hpp"
#include "eos/types.hpp"

namespace eos::stability_set {

/// Membership verdict for the positive invariant set, with the product-window
/// witnesses. Witnesses are NaN when the product sign already disqualifies w.
struct StabilityReport {
    enum class Reason { none, sharpness_too_large, product_nonpositive, no_valid_b };

    bool member = false;
    double b_minus = 0.0;        // >= 1
    double b_plus = 0.0;         // > 1, +inf when no root below the scan cap
    double gfs_sharpness = 0.0;  // phi(w)
    double threshold = 0.0;      // 2*sqrt(2)/eta
    Reason reason = Reason::none;
};

const char* to_string(StabilityReport::Reason r);

/// Largest product reachable in one GD step from the trajectory's [0, 1]
/// product range: max over x in [0,1] of q_eta(x). Dense 1024-point grid plus
/// golden-section refinement of the best cell. Always >= 1 (q(1) = 1).
double b_minus(const gf_exact::BalanceSignature& sig, double eta);

/// Smallest product x >= 1 whose GD step annihilates a coordinate, i.e. the
/// first root of q_eta on [1, inf). Found as the first root of
/// u(x) - eta*(x-1)*x (the smallest-square factor), which crosses zero
/// transversally even where q itself only touches zero. Multiplicative scan
/// by 1.01 up to 1e6, then bisection; +inf when the scan finds no crossing.
double b_plus(const gf_exact::BalanceSignature& sig, double eta);

/// Membership test: pi(w) > 0, phi(w) <= 2*sqrt(2)/eta, and the witness
/// window admits some B, i.e. b_plus > max(b_minus, pi(w), 1).
StabilityReport in_stability_set(const WeightVector& w, double eta);

/// True when membership at eta1 implies membership at eta2 < eta1
/// (vacuously true for non-members). Property-test helper.
bool nesting_check(const WeightVector& w, double eta1, double eta2);

}  // namespace eos::stability_set
