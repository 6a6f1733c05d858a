#pragma once

#include <span>
#include <vector>

#include "eos/rng.hpp"
#include "eos/types.hpp"

namespace eos::order_theory {

/// Two positive vectors of equal length and equal coordinate product
/// (relative tolerance 1e-12), with u log-majorized by v.
struct OrderedPair {
    std::vector<double> u;
    std::vector<double> v;
};

/// Balance quasi-order: every consecutive sorted-square gap of u is at most
/// the corresponding gap of v (additive slack 1e-12 on squared gaps).
bool balance_leq(const WeightVector& u, const WeightVector& v);

/// Log-majorization: equal total products and descending prefix-product
/// dominance, both at relative tolerance 1e-10. Entries must be positive.
bool log_majorizes(std::span<const double> u, std::span<const double> v);

/// Draws a positive v, then contracts random coordinate pairs toward each
/// other in log-space (T-transforms), which preserves the product and
/// guarantees u precedes v in log-majorization by construction.
OrderedPair sample_log_majorizing_pair(int depth, Rng& rng);

/// Sampled check of the three log-Schur-convexity claims used by the
/// GFS-sharpness monotonicity argument. Parts 2 and 3 apply only on
/// product >= 1 / product <= 1 respectively.
struct SchurReport {
    bool applicable[3] = {false, false, false};
    bool holds[3] = {false, false, false};
    bool all_applicable_hold() const {
        for (int i = 0; i < 3; ++i)
            if (applicable[i] && !holds[i]) return false;
        return true;
    }
};

SchurReport check_schur_lemma39(const OrderedPair& pair, double eta);

}  // namespace eos::order_theory
