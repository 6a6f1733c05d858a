#pragma once

#include <cstddef>

namespace eos::qmap {

// Kernels for the one-step product map
//
//   q_eta(x) = x + sum_{m=1..D} eta^m (1-x)^m x^{m-1} s_m(w(x)),
//
// where w(x) is the weight on a fixed gradient-flow trajectory (given by its
// offset signature) with coordinate product x. Evaluating it means solving
//   prod_c (u + o_c) = x^2
// for the base square u, then forming the elementary symmetric values of the
// squares u + o_c. These loops dominate the stability-window searches and the
// bifurcation burn-ins, so they exist in a scalar reference version and an
// AVX2 version processing four lanes.
//
// Both versions execute the identical per-lane operation sequence with FP
// contraction disabled, so their outputs are bit-for-bit equal; the
// equivalence suite asserts exactly that.

/// Offsets are one signature's nonnegative square gaps, descending,
/// offsets[depth-1] == 0. Solves prod_c (u + o_c) = x^2 for u >= 0 by Newton
/// with a bisection safeguard (the polynomial is increasing and convex).
/// `u0` is a warm start; pass a negative value for a cold start.
double solve_base_square(int depth, const double* offsets, double x, double u0);

/// q_eta(x) for one signature. `u_inout` carries the base-square warm start
/// across calls (may be null).
double eval(int depth, const double* offsets, double eta, double x, double* u_inout);

struct Kernels {
    const char* name;

    /// Shared-signature batch: q[i] = q_eta(x[i]). Warm starts run with lane
    /// stride 4 (element i seeds from element i-4) in every implementation,
    /// which keeps results identical across them.
    void (*eval_grid)(int depth, const double* offsets, double eta,
                      const double* x, double* q, std::size_t n);

    /// Lockstep iteration of n independent chains with per-lane offsets in
    /// coordinate-major layout (offs_cm[c * n + lane]). x and u are the
    /// per-lane state, updated in place. A lane whose iterate leaves
    /// (0, divergence_bound) or goes non-finite freezes at its last value,
    /// with alive[lane] = 0 and death_step[lane] = the offending step.
    /// When `tail` is non-null it receives the last min(tail_len, steps)
    /// iterates, row s (lane-major) holding step (steps - tail_len + s).
    void (*iterate_chains)(int depth, const double* offs_cm, std::size_t n, double eta,
                           double* x, double* u, long steps, double divergence_bound,
                           double* tail, long tail_len,
                           unsigned char* alive, long* death_step);
};

const Kernels& scalar_kernels();
bool avx2_available();

/// Runtime-selected kernels. EOS_SIMD=scalar|avx2 overrides the choice
/// (avx2 silently falls back if the CPU lacks it).
const Kernels& kernels();

}  // namespace eos::qmap
