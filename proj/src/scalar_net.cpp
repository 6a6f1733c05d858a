#include "eos/scalar_net.hpp"

#include <Eigen/Eigenvalues>

namespace eos::scalar_net {

double loss(const WeightVector& w) {
    const double r = w.product() - 1.0;
    return 0.5 * r * r;
}

Eigen::VectorXd leave_one_out(const WeightVector& w) {
    const int d = w.depth();
    Eigen::VectorXd out(d);
    // prefix[i] = w_0 * ... * w_{i-1}, suffix accumulated on the fly.
    std::array<double, kMaxDepth + 1> prefix{};
    prefix[0] = 1.0;
    for (int i = 0; i < d; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] * w[i];
    double suffix = 1.0;
    for (int i = d - 1; i >= 0; --i) {
        out[i] = prefix[static_cast<std::size_t>(i)] * suffix;
        suffix *= w[i];
    }
    return out;
}

Eigen::VectorXd gradient(const WeightVector& w) {
    const double r = w.product() - 1.0;
    Eigen::VectorXd g = leave_one_out(w);
    g *= r;
    return g;
}

Eigen::MatrixXd hessian(const WeightVector& w) {
    const int d = w.depth();
    const double pi = w.product();
    const Eigen::VectorXd p1 = leave_one_out(w);
    Eigen::MatrixXd h = p1 * p1.transpose();
    // Leave-two-out products: drop coordinate i, then leave-one-out within
    // the remainder gives prod_{k != i,j} w_k.
    for (int i = 0; i < d; ++i) {
        std::array<double, kMaxDepth + 1> pre{};
        pre[0] = 1.0;
        int m = 0;
        std::array<int, kMaxDepth> idx{};
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            idx[static_cast<std::size_t>(m)] = j;
            pre[static_cast<std::size_t>(m) + 1] = pre[static_cast<std::size_t>(m)] * w[j];
            ++m;
        }
        double suf = 1.0;
        for (int k = m - 1; k >= 0; --k) {
            const int j = idx[static_cast<std::size_t>(k)];
            if (j > i) h(i, j) += (pi - 1.0) * pre[static_cast<std::size_t>(k)] * suf;
            suf *= w[j];
        }
    }
    // Mirror the strictly-upper contributions; diagonal stays p1_i^2.
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) h(j, i) = h(i, j);
    return h;
}

double sharpness(const WeightVector& w) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian(w), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

SymmetricValues symmetric_values(const WeightVector& w) {
    const int d = w.depth();
    const auto sq = w.squares();
    std::array<double, kMaxDepth + 1> c{};  // c[k] = e_k of squares seen so far
    c[0] = 1.0;
    for (int i = 0; i < d; ++i) {
        const double f = sq[static_cast<std::size_t>(i)];
        for (int k = std::min(i + 1, d); k >= 1; --k)
            c[static_cast<std::size_t>(k)] += f * c[static_cast<std::size_t>(k) - 1];
    }
    SymmetricValues out;
    out.depth = d;
    for (int m = 0; m <= d; ++m) out.s[static_cast<std::size_t>(m)] = c[static_cast<std::size_t>(d - m)];
    return out;
}

double s1(std::span<const double> x) {
    const int d = static_cast<int>(x.size());
    std::array<double, kMaxDepth + 1> c{};
    c[0] = 1.0;
    for (int i = 0; i < d; ++i) {
        const double f = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        for (int k = std::min(i + 1, d); k >= 1; --k)
            c[static_cast<std::size_t>(k)] += f * c[static_cast<std::size_t>(k) - 1];
    }
    return c[static_cast<std::size_t>(d - 1)];
}

}  // namespace eos::scalar_net
