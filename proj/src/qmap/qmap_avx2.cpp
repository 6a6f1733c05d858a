// AVX2 variant of the q-map kernels: four lanes per vector, one lane per
// chain/grid element. Every arithmetic expression mirrors the scalar
// reference operation for operation (no FMA, same associativity), so lane
// results are bit-identical to the scalar path.

#include "qmap_kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cstddef>
#include <limits>

#include "eos/types.hpp"

namespace eos::qmap {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr int kMaxNewtonIters = 80;

inline __m256d abs_pd(__m256d v) {
    return _mm256_and_pd(v, _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL)));
}

__m256d solve4(const int depth, const __m256d* o, const __m256d x, const __m256d u0) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d xx = _mm256_mul_pd(x, x);
    __m256d done = _mm256_cmp_pd(xx, zero, _CMP_EQ_OQ);  // xx == 0 -> u = 0
    const __m256d hi0 = _mm256_max_pd(one, xx);
    const __m256d warm_ok = _mm256_and_pd(_mm256_cmp_pd(u0, zero, _CMP_GT_OQ),
                                          _mm256_cmp_pd(u0, inf, _CMP_LT_OQ));
    __m256d u = _mm256_blendv_pd(hi0, u0, warm_ok);
    u = _mm256_andnot_pd(done, u);
    __m256d lo = zero;
    __m256d hi = hi0;
    const __m256d tol = _mm256_mul_pd(_mm256_set1_pd(2.0 * depth * kEps), xx);
    for (int it = 0; it < kMaxNewtonIters; ++it) {
        __m256d p = one;
        __m256d dp = zero;
        for (int c = 0; c < depth; ++c) {
            const __m256d f = _mm256_add_pd(u, o[c]);
            dp = _mm256_add_pd(_mm256_mul_pd(dp, f), p);
            p = _mm256_mul_pd(p, f);
        }
        const __m256d r = _mm256_sub_pd(p, xx);
        done = _mm256_or_pd(done, _mm256_cmp_pd(abs_pd(r), tol, _CMP_LE_OQ));
        if (_mm256_movemask_pd(done) == 0xF) break;
        const __m256d rpos = _mm256_cmp_pd(r, zero, _CMP_GT_OQ);
        const __m256d upd_hi = _mm256_andnot_pd(done, rpos);
        const __m256d upd_lo = _mm256_andnot_pd(done, _mm256_andnot_pd(rpos, _mm256_cmp_pd(r, r, _CMP_EQ_OQ)));
        hi = _mm256_blendv_pd(hi, u, upd_hi);
        lo = _mm256_blendv_pd(lo, u, upd_lo);
        __m256d un = _mm256_sub_pd(u, _mm256_div_pd(r, dp));
        const __m256d in_range = _mm256_and_pd(_mm256_cmp_pd(un, lo, _CMP_GT_OQ),
                                               _mm256_cmp_pd(un, hi, _CMP_LT_OQ));
        un = _mm256_blendv_pd(_mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_add_pd(lo, hi)), un,
                              in_range);
        done = _mm256_or_pd(done, _mm256_cmp_pd(un, u, _CMP_EQ_OQ));
        u = _mm256_blendv_pd(un, u, done);
    }
    return u;
}

__m256d eval4(const int depth, const __m256d* o, const double eta, const __m256d x,
              __m256d* u_inout) {
    const __m256d u = solve4(depth, o, x, *u_inout);
    *u_inout = u;

    __m256d c[kMaxDepth + 1];
    c[0] = _mm256_set1_pd(1.0);
    for (int k = 1; k <= depth; ++k) c[k] = _mm256_setzero_pd();
    for (int i = 0; i < depth; ++i) {
        const __m256d f = _mm256_add_pd(u, o[i]);
        const int kmax = i + 1 < depth ? i + 1 : depth;
        for (int k = kmax; k >= 1; --k)
            c[k] = _mm256_add_pd(c[k], _mm256_mul_pd(f, c[k - 1]));
    }

    const __m256d t = _mm256_mul_pd(_mm256_set1_pd(eta), _mm256_sub_pd(_mm256_set1_pd(1.0), x));
    __m256d g = t;
    __m256d acc = _mm256_setzero_pd();
    for (int m = 1; m <= depth; ++m) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(g, c[depth - m]));
        g = _mm256_mul_pd(_mm256_mul_pd(g, t), x);
    }
    return _mm256_add_pd(x, acc);
}

void eval_grid_avx2(const int depth, const double* offsets, const double eta, const double* x,
                    double* q, const std::size_t n) {
    __m256d o[kMaxDepth];
    for (int c = 0; c < depth; ++c) o[c] = _mm256_set1_pd(offsets[c]);
    __m256d uv = _mm256_set1_pd(-1.0);
    const std::size_t nblk = n - n % 4;
    for (std::size_t i = 0; i < nblk; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(q + i, eval4(depth, o, eta, xv, &uv));
    }
    if (nblk < n) {
        double warm[4];
        _mm256_storeu_pd(warm, uv);
        for (std::size_t i = nblk; i < n; ++i) {
            double u = warm[i & 3];
            q[i] = eval(depth, offsets, eta, x[i], &u);
            warm[i & 3] = u;
        }
    }
}

void iterate_chains_avx2(const int depth, const double* offs_cm, const std::size_t n,
                         const double eta, double* x, double* u, const long steps,
                         const double divergence_bound, double* tail, const long tail_len,
                         unsigned char* alive, long* death_step) {
    for (std::size_t lane = 0; lane < n; ++lane) {
        alive[lane] = 1;
        death_step[lane] = -1;
    }
    const long tail_from = (tail && steps > tail_len) ? steps - tail_len : 0;
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d bound = _mm256_set1_pd(divergence_bound);
    const std::size_t nblk = n - n % 4;

    for (std::size_t b = 0; b < nblk; b += 4) {
        __m256d o[kMaxDepth];
        for (int c = 0; c < depth; ++c)
            o[c] = _mm256_loadu_pd(offs_cm + static_cast<std::size_t>(c) * n + b);
        __m256d xv = _mm256_loadu_pd(x + b);
        __m256d uv = _mm256_loadu_pd(u + b);
        __m256d alive_m = _mm256_cmp_pd(zero, zero, _CMP_EQ_OQ);  // all lanes true
        for (long s = 0; s < steps; ++s) {
            if (_mm256_movemask_pd(alive_m) != 0) {
                // Dead lanes evaluate a harmless surrogate state; their
                // results are blended away below.
                const __m256d x_eff = _mm256_blendv_pd(one, xv, alive_m);
                __m256d u_eff = _mm256_blendv_pd(one, uv, alive_m);
                const __m256d q = eval4(depth, o, eta, x_eff, &u_eff);
                const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(q, zero, _CMP_GT_OQ),
                                                 _mm256_cmp_pd(q, bound, _CMP_LT_OQ));
                const __m256d newly_dead = _mm256_andnot_pd(ok, alive_m);
                const int dead_bits = _mm256_movemask_pd(newly_dead);
                if (dead_bits != 0) {
                    for (int l = 0; l < 4; ++l)
                        if (dead_bits & (1 << l)) {
                            alive[b + static_cast<std::size_t>(l)] = 0;
                            death_step[b + static_cast<std::size_t>(l)] = s;
                        }
                }
                const __m256d take = _mm256_and_pd(alive_m, ok);
                xv = _mm256_blendv_pd(xv, q, take);
                uv = _mm256_blendv_pd(uv, u_eff, take);
                alive_m = take;
            }
            if (tail && s >= tail_from)
                _mm256_storeu_pd(tail + static_cast<std::size_t>(s - tail_from) * n + b, xv);
        }
        _mm256_storeu_pd(x + b, xv);
        _mm256_storeu_pd(u + b, uv);
    }

    // Remainder lanes run the scalar reference arithmetic in place.
    if (nblk < n) {
        double o[kMaxDepth];
        for (long s = 0; s < steps; ++s) {
            for (std::size_t lane = nblk; lane < n; ++lane) {
                if (alive[lane]) {
                    for (int c = 0; c < depth; ++c)
                        o[c] = offs_cm[static_cast<std::size_t>(c) * n + lane];
                    double uu = u[lane];
                    const double qv = eval(depth, o, eta, x[lane], &uu);
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
}

const Kernels kAvx2{"avx2", &eval_grid_avx2, &iterate_chains_avx2};

}  // namespace

const Kernels& avx2_kernels() { return kAvx2; }

}  // namespace eos::qmap

#else  // !__AVX2__

namespace eos::qmap {
const Kernels& avx2_kernels() { return scalar_kernels(); }
}  // namespace eos::qmap

#endif
