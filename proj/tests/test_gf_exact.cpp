#include <doctest.h>

#include <cmath>

#include "eos/flow_integrator.hpp"
#include "eos/gf_exact.hpp"
#include "eos/scalar_net.hpp"
#include "test_util.hpp"

using namespace eos;
using namespace eos::testutil;
namespace gf = eos::gf_exact;

namespace {

/// Independent bisection oracle for the base square: solves
/// prod_i (u + o_i) = x^2 on [0, hi] without Newton.
double bisect_base_square(int depth, const double* offsets, double x) {
    const double xx = x * x;
    double lo = 0.0;
    double hi = std::max(1.0, xx);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double p = 1.0;
        for (int c = 0; c < depth; ++c) p *= mid + offsets[c];
        if (p < xx)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("gf_exact");

TEST_CASE("signature offsets") {
    const auto s1 = gf::signature(WeightVector{1, 1, 1});
    CHECK(s1.offsets[0] == 0.0);
    CHECK(s1.offsets[1] == 0.0);
    CHECK(s1.offsets[2] == 0.0);
    CHECK(s1.product_sign == 1);

    const auto s2 = gf::signature(WeightVector{2, 0.5});
    CHECK(s2.offsets[0] == doctest::Approx(3.75).epsilon(1e-15));
    CHECK(s2.offsets[1] == 0.0);

    const auto s3 = gf::signature(WeightVector{12.5, 12.5, 0.05, 0.05});
    CHECK(s3.offsets[0] == doctest::Approx(156.2475).epsilon(1e-13));
    CHECK(s3.offsets[1] == doctest::Approx(156.2475).epsilon(1e-13));
    CHECK(s3.offsets[2] == 0.0);
    CHECK(s3.offsets[3] == 0.0);

    CHECK(gf::signature(WeightVector{-1, 2}).product_sign == -1);
    CHECK(gf::signature(WeightVector{0, 2}).product_sign == 0);
}

TEST_CASE("weight_from_product closed forms") {
    // balanced: every coordinate x^(1/D)
    Rng rng(2024010);
    for (int d = 2; d <= 6; ++d) {
        const auto sig = gf::signature(WeightVector(std::vector<double>(static_cast<std::size_t>(d), 2.0)));
        const double x = rng.uniform(0.2, 3.0);
        const WeightVector w = gf::weight_from_product(sig, x);
        for (int i = 0; i < d; ++i)
            CHECK(rel_err(w[i], std::pow(x, 1.0 / d)) < 1e-12);
    }

    // offsets [3.75, 0] at x = 1: u = 0.25, w = [2, 0.5]
    const auto sig = gf::signature(WeightVector{2, 0.5});
    const WeightVector w = gf::weight_from_product(sig, 1.0);
    CHECK(rel_err(w[0], 2.0) < 1e-13);
    CHECK(rel_err(w[1], 0.5) < 1e-13);

    // [4, 0.5]: base square from the bisection oracle
    const auto sig2 = gf::signature(WeightVector{4, 0.5});
    const double u_oracle = bisect_base_square(2, sig2.offsets.data(), 1.0);
    CHECK(u_oracle == doctest::Approx(0.063285).epsilon(1e-4));
    const WeightVector w2 = gf::weight_from_product(sig2, 1.0);
    CHECK(rel_err(w2[1] * w2[1], u_oracle) < 1e-10);

    CHECK_THROWS_AS(gf::weight_from_product(sig, 0.0), DomainError);
    CHECK_THROWS_AS(gf::weight_from_product(sig, -1.0), DomainError);
    CHECK_THROWS_AS(gf::weight_from_product(gf::signature(WeightVector{-1, 2}), 1.0), SignError);
}

TEST_CASE("base-square solve matches the bisection oracle on random signatures") {
    Rng rng(2024011);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = rng.uniform_int(2, 8);
        const auto sig = random_signature(rng, d);
        const double x = rng.uniform(0.05, 4.0);
        const WeightVector w = gf::weight_from_product(sig, x);
        const double u = w.squares()[sig.perm[static_cast<std::size_t>(d - 1)]];
        const double u_oracle = bisect_base_square(d, sig.offsets.data(), x);
        CHECK(std::fabs(u - u_oracle) < 1e-9 * (1.0 + u_oracle));
        CHECK(rel_err(w.product(), x) < 1e-12);
    }
}

TEST_CASE("round-trip: signature(weight_from_product(sig, x)) == sig") {
    Rng rng(2024012);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = rng.uniform_int(2, 8);
        const auto sig = random_signature(rng, d);
        const double x = rng.uniform(0.1, 3.0);
        const auto back = gf::signature(gf::weight_from_product(sig, x));
        for (int k = 0; k < d; ++k)
            CHECK(std::fabs(back.offsets[static_cast<std::size_t>(k)] -
                            sig.offsets[static_cast<std::size_t>(k)]) < 1e-10);
    }
}

TEST_CASE("gfs closed forms and invariance") {
    // scaled all-ones: solution all-ones, phi = D
    for (int d = 2; d <= 6; ++d) {
        const WeightVector w(std::vector<double>(static_cast<std::size_t>(d), 1.7));
        const auto res = gf::gfs(w);
        CHECK(rel_err(res.gfs_sharpness, static_cast<double>(d)) < 1e-12);
        for (int i = 0; i < d; ++i) CHECK(rel_err(res.solution[i], 1.0) < 1e-12);
    }

    // already a minimum: solution is the point itself, phi = sharpness
    const WeightVector wmin{2, 0.5};
    const auto res = gf::gfs(wmin);
    CHECK(rel_err(res.solution[0], 2.0) < 1e-12);
    CHECK(rel_err(res.gfs_sharpness, scalar_net::sharpness(wmin)) < 1e-10);

    CHECK_THROWS_AS(gf::gfs(WeightVector{-1, 2}), SignError);
    CHECK_THROWS_AS(gf::gfs(WeightVector{0, 2}), SignError);

    // sign pattern with positive product is preserved
    const auto resn = gf::gfs(WeightVector{-2, -0.5, 1});
    CHECK(resn.solution[0] < 0.0);
    CHECK(resn.solution[1] < 0.0);
    CHECK(rel_err(resn.solution.product(), 1.0) < 1e-10);

    // GF-invariance: phi identical across products on one trajectory
    Rng rng(2024013);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = rng.uniform_int(2, 6);
        const auto sig = random_signature(rng, d);
        const double xa = rng.uniform(0.1, 3.0);
        const double xb = rng.uniform(0.1, 3.0);
        const double fa = gf::gfs(gf::weight_from_product(sig, xa)).gfs_sharpness;
        const double fb = gf::gfs(gf::weight_from_product(sig, xb)).gfs_sharpness;
        CHECK(rel_err(fa, fb) < 1e-10);
    }
}

TEST_CASE("gfs sharpness for [4, 0.5] cross-checked against the RK4 flow") {
    const WeightVector w{4, 0.5};
    const auto res = gf::gfs(w);
    const double u = bisect_base_square(2, gf::signature(w).offsets.data(), 1.0);
    CHECK(rel_err(res.gfs_sharpness, 1.0 / u + 1.0 / (u + 15.75)) < 1e-9);

    auto oracle = flow_integrator::scalar_net_oracle(2);
    flow_integrator::FlowParams fp;
    fp.loss_threshold = 1e-12;
    fp.step_scale = 0.1;
    const auto flow = flow_integrator::rk4_flow(oracle, to_eigen(w), fp);
    REQUIRE(flow.status == flow_integrator::FlowStatus::success);
    CHECK(rel_err(res.gfs_sharpness, flow.top_eigenvalue) < 1e-4);
}

TEST_CASE("stilde") {
    // balanced depth-2: s~_1(x) = 2x
    const auto sig = gf::signature(WeightVector{1, 1});
    Rng rng(2024014);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = rng.uniform(0.1, 3.0);
        const auto s = gf::stilde(sig, x);
        CHECK(rel_err(s[1], 2.0 * x) < 1e-12);
        CHECK(s[2] == 1.0);
    }

    // s~_D = 1 for any signature
    for (int trial = 0; trial < 50; ++trial) {
        const int d = rng.uniform_int(2, 8);
        const auto sg = random_signature(rng, d);
        CHECK(gf::stilde(sg, rng.uniform(0.2, 2.0))[d] == 1.0);
    }
}

TEST_CASE("stilde derivative identities by central differences") {
    Rng rng(2024015);
    const double h = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = rng.uniform_int(2, 6);
        const auto sig = random_signature(rng, d);
        const double x = rng.uniform(0.5, 2.0);
        const auto sm = gf::stilde(sig, x);
        const auto sp = gf::stilde(sig, x + h);
        const auto sn = gf::stilde(sig, x - h);

        // d s~_m / dx = 2 (m+1) x s~_{m+1} / s~_1 for m in [D-1] and m = 0
        for (int m = 0; m < d; ++m) {
            const double fd = (sp[m] - sn[m]) / (2.0 * h);
            const double expected = 2.0 * (m + 1) * x * sm[m + 1] / sm[1];
            CHECK(std::fabs(fd - expected) < 1e-5 * std::max(1.0, std::fabs(expected)));
        }
        // d w_i^2 / dx = 2 x / s~_1
        const WeightVector wp = gf::weight_from_product(sig, x + h);
        const WeightVector wn = gf::weight_from_product(sig, x - h);
        for (int i = 0; i < d; ++i) {
            const double fd = (wp[i] * wp[i] - wn[i] * wn[i]) / (2.0 * h);
            const double expected = 2.0 * x / sm[1];
            CHECK(std::fabs(fd - expected) < 1e-5 * std::max(1.0, std::fabs(expected)));
        }
    }
}

TEST_SUITE_END();
