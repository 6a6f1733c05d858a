#include <doctest.h>

#include <cstring>
#include <vector>

#include "eos/qmap.hpp"
#include "test_util.hpp"

using namespace eos;
using namespace eos::testutil;

TEST_SUITE_BEGIN("qmap");

TEST_CASE("dispatch reports an available kernel") {
    const auto& k = qmap::kernels();
    CHECK((std::strcmp(k.name, "scalar") == 0 || std::strcmp(k.name, "avx2") == 0));
    if (qmap::avx2_available()) CHECK(std::strcmp(k.name, "avx2") == 0);
}

TEST_CASE("avx2 grid evaluation is bit-identical to the scalar reference") {
    if (!qmap::avx2_available()) return;  // nothing to compare on this host
    Rng rng(2024020);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = rng.uniform_int(2, 10);
        const auto sig = random_signature(rng, d, 20.0);
        const double eta = rng.uniform(0.01, 0.6);
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 300));
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.uniform(0.0, 3.0);
        std::vector<double> q_scalar(n);
        std::vector<double> q_simd(n);
        qmap::scalar_kernels().eval_grid(d, sig.offsets.data(), eta, xs.data(), q_scalar.data(), n);
        qmap::kernels().eval_grid(d, sig.offsets.data(), eta, xs.data(), q_simd.data(), n);
        CHECK(std::memcmp(q_scalar.data(), q_simd.data(), n * sizeof(double)) == 0);
    }
}

TEST_CASE("avx2 chain iteration is bit-identical to the scalar reference") {
    if (!qmap::avx2_available()) return;
    Rng rng(2024021);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = rng.uniform_int(2, 6);
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 13));
        const double eta = rng.uniform(0.05, 0.5);
        const long steps = rng.uniform_int(50, 400);
        const long tail_len = std::min<long>(steps, rng.uniform_int(1, 64));

        std::vector<double> offs_cm(static_cast<std::size_t>(d) * n);
        std::vector<double> x0(n);
        for (std::size_t lane = 0; lane < n; ++lane) {
            const auto sig = random_signature(rng, d, 10.0);
            for (int c = 0; c < d; ++c)
                offs_cm[static_cast<std::size_t>(c) * n + lane] =
                    sig.offsets[static_cast<std::size_t>(c)];
            x0[lane] = rng.uniform(0.2, 2.5);
        }

        auto run = [&](const qmap::Kernels& k) {
            struct Out {
                std::vector<double> x, u, tail;
                std::vector<unsigned char> alive;
                std::vector<long> death;
            } o;
            o.x = x0;
            o.u.assign(n, -1.0);
            o.tail.assign(static_cast<std::size_t>(tail_len) * n, 0.0);
            o.alive.assign(n, 0);
            o.death.assign(n, 0);
            k.iterate_chains(d, offs_cm.data(), n, eta, o.x.data(), o.u.data(), steps, 1e8,
                             o.tail.data(), tail_len, o.alive.data(), o.death.data());
            return o;
        };
        const auto a = run(qmap::scalar_kernels());
        const auto b = run(qmap::kernels());
        CHECK(std::memcmp(a.x.data(), b.x.data(), n * sizeof(double)) == 0);
        CHECK(std::memcmp(a.u.data(), b.u.data(), n * sizeof(double)) == 0);
        CHECK(std::memcmp(a.tail.data(), b.tail.data(), a.tail.size() * sizeof(double)) == 0);
        CHECK(a.alive == b.alive);
        CHECK(a.death == b.death);
    }
}

TEST_CASE("solver handles warm and cold starts identically in value") {
    Rng rng(2024022);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = rng.uniform_int(2, 10);
        const auto sig = random_signature(rng, d, 15.0);
        const double x = rng.uniform(0.01, 5.0);
        const double cold = qmap::solve_base_square(d, sig.offsets.data(), x, -1.0);
        const double warm = qmap::solve_base_square(d, sig.offsets.data(), x, cold * 1.7 + 0.1);
        // same root to near machine precision regardless of the start
        CHECK(rel_err(cold, warm) < 1e-13);
        double p = 1.0;
        for (int c = 0; c < d; ++c) p *= cold + sig.offsets[static_cast<std::size_t>(c)];
        CHECK(rel_err(p, x * x) < 1e-12);
    }
}

TEST_CASE("x = 0 maps to base square 0") {
    const double o[3] = {2.0, 1.0, 0.0};
    CHECK(qmap::solve_base_square(3, o, 0.0, -1.0) == 0.0);
}

TEST_SUITE_END();
