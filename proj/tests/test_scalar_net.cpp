#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "eos/scalar_net.hpp"
#include "test_util.hpp"

using namespace eos;
using namespace eos::testutil;
namespace sn = eos::scalar_net;

TEST_SUITE_BEGIN("scalar_net");

TEST_CASE("loss values") {
    CHECK(sn::loss(WeightVector{1, 1, 1, 1}) == 0.0);
    CHECK(sn::loss(WeightVector{2, 0.5}) == 0.0);
    CHECK(sn::loss(WeightVector{2, 2}) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(sn::loss(WeightVector{0, 3}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("weight vector invariants") {
    CHECK_THROWS_AS(WeightVector(std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(WeightVector(std::vector<double>(17, 1.0)), DomainError);
    CHECK_THROWS_AS(WeightVector({1.0, std::nan("")}), DomainError);
}

TEST_CASE("gradient examples") {
    // pi = 1 -> zero gradient
    const auto g0 = sn::gradient(WeightVector{2, 0.5});
    CHECK(g0.norm() == 0.0);

    const auto g1 = sn::gradient(WeightVector{2, 2});
    CHECK(g1[0] == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(g1[1] == doctest::Approx(6.0).epsilon(1e-15));

    // zero coordinate, leave-one-out form
    const auto g2 = sn::gradient(WeightVector{0, 3});
    CHECK(g2[0] == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(g2[1] == 0.0);
}

TEST_CASE("gradient and hessian match finite differences on 1000 random points") {
    Rng rng(2024001);
    const double h = 1e-5;
    double worst_g = 0.0;
    double worst_h = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = rng.uniform_int(2, 6);
        const WeightVector w = random_weight(rng, d);
        const Eigen::VectorXd x = to_eigen(w);

        auto loss_at = [](const Eigen::VectorXd& v) { return sn::loss(to_weight(v)); };
        auto grad_at = [](const Eigen::VectorXd& v) { return sn::gradient(to_weight(v)); };

        const Eigen::VectorXd g = sn::gradient(w);
        const Eigen::VectorXd g_fd = fd_gradient(loss_at, x, h);
        const double gscale = std::max(1.0, g.norm());
        worst_g = std::max(worst_g, (g - g_fd).norm() / gscale);

        const Eigen::MatrixXd hm = sn::hessian(w);
        const Eigen::MatrixXd h_fd = fd_jacobian(grad_at, x, h);
        const double hscale = std::max(1.0, hm.norm());
        worst_h = std::max(worst_h, (hm - h_fd).norm() / hscale);

        CHECK(hm.isApprox(hm.transpose(), 0.0));  // exact symmetry
    }
    CHECK(worst_g < 1e-6);
    CHECK(worst_h < 1e-5);
}

TEST_CASE("hessian at a minimum is the rank-one outer product") {
    const Eigen::MatrixXd h = sn::hessian(WeightVector{1, 1});
    CHECK(h(0, 0) == 1.0);
    CHECK(h(0, 1) == 1.0);
    CHECK(h(1, 0) == 1.0);
    CHECK(h(1, 1) == 1.0);
}

TEST_CASE("sharpness values") {
    CHECK(sn::sharpness(WeightVector{1, 1}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sn::sharpness(WeightVector{1, 1, 1, 1}) == doctest::Approx(4.0).epsilon(1e-12));

    // signed max, not max magnitude: at pi < 0 points eigenvalues can be
    // negative; compare against the dense solver on a crafted point.
    const WeightVector w{-2, 3, 0.5};
    const Eigen::MatrixXd h = sn::hessian(w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    CHECK(sn::sharpness(w) == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-14));
}

TEST_CASE("sharpness at minima equals s1") {
    Rng rng(2024002);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = rng.uniform_int(2, 6);
        // build a pi = 1 point: random positive entries, last fixes the product
        std::vector<double> w(static_cast<std::size_t>(d));
        double p = 1.0;
        for (int i = 0; i + 1 < d; ++i) {
            w[static_cast<std::size_t>(i)] = rng.uniform(0.3, 2.5);
            p *= w[static_cast<std::size_t>(i)];
        }
        w[static_cast<std::size_t>(d - 1)] = 1.0 / p;
        const WeightVector wv(w);
        const double lam = sn::sharpness(wv);
        const double s1v = sn::symmetric_values(wv)[1];
        CHECK(rel_err(lam, s1v) < 1e-10);
    }
}

TEST_CASE("symmetric values") {
    const SymmetricValues s = sn::symmetric_values(WeightVector{1, 1});
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 2.0);
    CHECK(s[2] == 1.0);

    // all-ones depth D: s_m = C(D, D-m)
    for (int d = 2; d <= 8; ++d) {
        const WeightVector w(std::vector<double>(static_cast<std::size_t>(d), 1.0));
        const SymmetricValues sv = sn::symmetric_values(w);
        double binom = 1.0;  // C(d, 0)
        CHECK(sv[d] == 1.0);
        for (int m = d - 1; m >= 0; --m) {
            const int k = d - m;
            binom = binom * (d - k + 1) / k;
            CHECK(sv[m] == doctest::Approx(binom).epsilon(1e-14));
        }
    }

    // s_D = 1 exactly, s_0 = pi^2
    Rng rng(2024003);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = rng.uniform_int(2, 6);
        const WeightVector w = random_weight(rng, d);
        const SymmetricValues sv = sn::symmetric_values(w);
        CHECK(sv[d] == 1.0);
        const double pi = w.product();
        CHECK(rel_err(sv[0], pi * pi) < 1e-13);
        // s_1 identity against pi^2 * sum 1/w_i^2 for nonzero entries
        double s1_direct = 0.0;
        for (int i = 0; i < d; ++i) s1_direct += pi * pi / (w[i] * w[i]);
        CHECK(rel_err(sv[1], s1_direct) < 1e-12);
        for (int m = 0; m <= d; ++m) CHECK(sv[m] >= 0.0);
    }
}

TEST_SUITE_END();
