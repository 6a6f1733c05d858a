#pragma once

#include <array>
#include <cstdint>

#include "eos/types.hpp"

namespace eos::gf_exact {

/// Canonical gradient-flow invariant of a weight vector: the sorted gaps of
/// the squared coordinates relative to the smallest square, plus the data
/// needed to reconstruct a GF-equivalent weight (signs and the permutation
/// to sorted order). Two weights on one GF trajectory share the offsets.
struct BalanceSignature {
    int depth = 0;
    /// Non-increasing, offsets[depth-1] == 0.
    std::array<double, kMaxDepth> offsets{};
    /// Sign of the coordinate product: +1, -1, or 0.
    int product_sign = 0;
    /// Coordinate signs in the original order (+1 / -1 / 0).
    std::array<std::int8_t, kMaxDepth> signs{};
    /// perm[k] = original index of the k-th largest square. Ties keep their
    /// original relative order, so reconstruction is deterministic.
    std::array<std::uint8_t, kMaxDepth> perm{};
};

/// Gradient-flow solution: the trajectory's product-1 point and its sharpness.
struct GfsResult {
    WeightVector solution;
    double gfs_sharpness = 0.0;
};

BalanceSignature signature(const WeightVector& w);

/// The weight on the signature's GF trajectory with product x > 0; requires
/// product_sign == +1. The base square solves prod_i (u + offset_i) = x^2.
WeightVector weight_from_product(const BalanceSignature& sig, double x);

/// Exact gradient-flow solution for pi(w) > 0: same signature, product 1.
/// No integration; balance conservation plus a 1-D root find.
GfsResult gfs(const WeightVector& w);

/// GFS sharpness phi of a trajectory, i.e. s_1 at product 1.
double gfs_sharpness_of(const BalanceSignature& sig);

/// s~_m(x) = s_m(w(x)) for the trajectory fixed by sig.
SymmetricValues stilde(const BalanceSignature& sig, double x);

}  // namespace eos::gf_exact
