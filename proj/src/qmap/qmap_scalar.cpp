#include "eos/qmap.hpp"

#include <cmath>

#include "eos/types.hpp"

namespace eos::qmap {

namespace {
constexpr double kEps = 2.220446049250313e-16;
constexpr int kMaxNewtonIters = 80;
}  // namespace

double solve_base_square(const int depth, const double* offsets, const double x, const double u0) {
    const double xx = x * x;
    if (xx == 0.0) return 0.0;
    const double hi0 = xx > 1.0 ? xx : 1.0;  // P(hi0) >= hi0^D >= xx
    double u = (u0 > 0.0 && std::isfinite(u0)) ? u0 : hi0;
    double lo = 0.0;
    double hi = hi0;
    const double tol = 2.0 * depth * kEps * xx;
    for (int it = 0; it < kMaxNewtonIters; ++it) {
        double p = 1.0;
        double dp = 0.0;
        for (int c = 0; c < depth; ++c) {
            const double f = u + offsets[c];
            dp = dp * f + p;
            p = p * f;
        }
        const double r = p - xx;
        if (std::fabs(r) <= tol) break;
        if (r > 0.0) hi = u; else lo = u;
        double un = u - r / dp;
        if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
        if (un == u) break;
        u = un;
    }
    return u;
}

double eval(const int depth, const double* offsets, const double eta, const double x,
            double* u_inout) {
    const double u = solve_base_square(depth, offsets, x, u_inout ? *u_inout : -1.0);
    if (u_inout) *u_inout = u;

    // c[k] = e_k of the squares; ascending insertion keeps every term
    // nonnegative, so there is no cancellation.
    double c[kMaxDepth + 1] = {};
    c[0] = 1.0;
    for (int i = 0; i < depth; ++i) {
        const double f = u + offsets[i];
        const int kmax = i + 1 < depth ? i + 1 : depth;
        for (int k = kmax; k >= 1; --k) c[k] = c[k] + f * c[k - 1];
    }

    // s_m = e_{D-m}; coefficient for term m is eta^m (1-x)^m x^{m-1}.
    const double t = eta * (1.0 - x);
    double g = t;
    double acc = 0.0;
    for (int m = 1; m <= depth; ++m) {
        acc = acc + g * c[depth - m];
        g = g * t * x;
    }
    return x + acc;
}

namespace {

void eval_grid_scalar(const int depth, const double* offsets, const double eta,
                      const double* x, double* q, const std::size_t n) {
    double warm[4] = {-1.0, -1.0, -1.0, -1.0};
    for (std::size_t i = 0; i < n; ++i) {
        double u = warm[i & 3];
        q[i] = eval(depth, offsets, eta, x[i], &u);
        warm[i & 3] = u;
    }
}

void iterate_chains_scalar(const int depth, const double* offs_cm, const std::size_t n,
                           const double eta, double* x, double* u, const long steps,
                           const double divergence_bound, double* tail, const long tail_len,
                           unsigned char* alive, long* death_step) {
    for (std::size_t lane = 0; lane < n; ++lane) {
        alive[lane] = 1;
        death_step[lane] = -1;
    }
    const long tail_from = (tail && steps > tail_len) ? steps - tail_len : 0;
    double o[kMaxDepth];
    for (long s = 0; s < steps; ++s) {
        for (std::size_t lane = 0; lane < n; ++lane) {
            if (alive[lane]) {
                for (int c = 0; c < depth; ++c)
                    o[c] = offs_cm[static_cast<std::size_t>(c) * n + lane];
                double uu = u[lane];
                const double qv = eval(depth, o, eta, x[lane], &uu);
                // NaN and +-inf both fail this pair of ordered comparisons.
                if (qv > 0.0 && qv < divergence_bound) {
                    x[lane] = qv;
                    u[lane] = uu;
                } else {
                    alive[lane] = 0;
                    death_step[lane] = s;
                }
            }
            if (tail && s >= tail_from)
                tail[static_cast<std::size_t>(s - tail_from) * n + lane] = x[lane];
        }
    }
}

const Kernels kScalar{"scalar", &eval_grid_scalar, &iterate_chains_scalar};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace eos::qmap
