#include "eos/gf_exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eos/error.hpp"
#include "eos/qmap.hpp"
#include "eos/scalar_net.hpp"

namespace eos::gf_exact {

BalanceSignature signature(const WeightVector& w) {
    const int d = w.depth();
    const auto sq = w.squares();

    BalanceSignature sig;
    sig.depth = d;
    const double pi = w.product();
    sig.product_sign = pi > 0.0 ? 1 : (pi < 0.0 ? -1 : 0);
    for (int i = 0; i < d; ++i) {
        const double v = w[i];
        sig.signs[static_cast<std::size_t>(i)] =
            static_cast<std::int8_t>(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
    }

    std::array<std::uint8_t, kMaxDepth> perm{};
    std::iota(perm.begin(), perm.begin() + d, std::uint8_t{0});
    // Stable: equal squares keep their original relative order.
    std::stable_sort(perm.begin(), perm.begin() + d, [&](std::uint8_t a, std::uint8_t b) {
        return sq[a] > sq[b];
    });
    sig.perm = perm;

    const double smallest = sq[perm[static_cast<std::size_t>(d - 1)]];
    for (int k = 0; k < d; ++k)
        sig.offsets[static_cast<std::size_t>(k)] = sq[perm[static_cast<std::size_t>(k)]] - smallest;
    sig.offsets[static_cast<std::size_t>(d - 1)] = 0.0;
    return sig;
}

WeightVector weight_from_product(const BalanceSignature& sig, double x) {
    if (!(x > 0.0)) throw DomainError("weight_from_product requires x > 0");
    if (sig.product_sign != +1)
        throw SignError("weight_from_product requires a positive-product signature");

    const double u = qmap::solve_base_square(sig.depth, sig.offsets.data(), x, -1.0);
    std::array<double, kMaxDepth> w{};
    for (int k = 0; k < sig.depth; ++k) {
        const std::size_t orig = sig.perm[static_cast<std::size_t>(k)];
        const double mag = std::sqrt(u + sig.offsets[static_cast<std::size_t>(k)]);
        w[orig] = sig.signs[orig] >= 0 ? mag : -mag;
    }
    return WeightVector(std::span<const double>(w.data(), static_cast<std::size_t>(sig.depth)));
}

GfsResult gfs(const WeightVector& w) {
    if (!(w.product() > 0.0))
        throw SignError("gradient-flow solution is only defined for pi(w) > 0 here");
    const BalanceSignature sig = signature(w);
    WeightVector sol = weight_from_product(sig, 1.0);
    const double phi = scalar_net::symmetric_values(sol)[1];
    return GfsResult{sol, phi};
}

double gfs_sharpness_of(const BalanceSignature& sig) {
    const double u = qmap::solve_base_square(sig.depth, sig.offsets.data(), 1.0, -1.0);
    // s_1 = e_{D-1} of the squares u + o_k; with product 1 this is
    // sum_k 1/(u + o_k), but the symmetric form needs no division.
    std::array<double, kMaxDepth + 1> c{};
    c[0] = 1.0;
    const int d = sig.depth;
    for (int i = 0; i < d; ++i) {
        const double f = u + sig.offsets[static_cast<std::size_t>(i)];
        for (int k = std::min(i + 1, d); k >= 1; --k)
            c[static_cast<std::size_t>(k)] += f * c[static_cast<std::size_t>(k) - 1];
    }
    return c[static_cast<std::size_t>(d - 1)];
}

SymmetricValues stilde(const BalanceSignature& sig, double x) {
    return scalar_net::symmetric_values(weight_from_product(sig, x));
}

}  // namespace eos::gf_exact
