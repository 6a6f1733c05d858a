#include "eos/order_theory.hpp"

#include <algorithm>
#include <cmath>

#include "eos/dynamics.hpp"
#include "eos/error.hpp"
#include "eos/scalar_net.hpp"

namespace eos::order_theory {

namespace {
constexpr double kGapSlack = 1e-12;    // additive, on squared gaps
constexpr double kProductTol = 1e-10;  // relative, on (prefix) products

std::vector<double> sorted_desc(std::span<const double> x) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end(), std::greater<double>());
    return s;
}
}  // namespace

bool balance_leq(const WeightVector& u, const WeightVector& v) {
    if (u.depth() != v.depth()) throw DepthMismatchError("balance_leq: depth mismatch");
    const int d = u.depth();
    std::vector<double> su(d);
    std::vector<double> sv(d);
    for (int i = 0; i < d; ++i) {
        su[static_cast<std::size_t>(i)] = u[i] * u[i];
        sv[static_cast<std::size_t>(i)] = v[i] * v[i];
    }
    std::sort(su.begin(), su.end(), std::greater<double>());
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    for (int i = 0; i + 1 < d; ++i) {
        const double gap_u = su[static_cast<std::size_t>(i)] - su[static_cast<std::size_t>(i) + 1];
        const double gap_v = sv[static_cast<std::size_t>(i)] - sv[static_cast<std::size_t>(i) + 1];
        if (gap_u > gap_v + kGapSlack) return false;
    }
    return true;
}

bool log_majorizes(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw DepthMismatchError("log_majorizes: length mismatch");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u[i] > 0.0) || !(v[i] > 0.0))
            throw DomainError("log_majorizes requires positive entries");

    const std::vector<double> su = sorted_desc(u);
    const std::vector<double> sv = sorted_desc(v);
    double pu = 1.0;
    double pv = 1.0;
    for (std::size_t k = 0; k < su.size(); ++k) {
        pu *= su[k];
        pv *= sv[k];
        const bool last = (k + 1 == su.size());
        if (last) {
            if (std::fabs(pu - pv) > kProductTol * std::max(std::fabs(pu), std::fabs(pv)))
                return false;
        } else if (pu > pv * (1.0 + kProductTol)) {
            return false;
        }
    }
    return true;
}

OrderedPair sample_log_majorizing_pair(int depth, Rng& rng) {
    if (depth < 2) throw DomainError("sample_log_majorizing_pair requires depth >= 2");
    std::vector<double> logs(static_cast<std::size_t>(depth));
    for (auto& l : logs) l = rng.normal(0.0, 0.7);

    OrderedPair pair;
    pair.v.resize(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i)
        pair.v[static_cast<std::size_t>(i)] = std::exp(logs[static_cast<std::size_t>(i)]);

    // Robin Hood transfers in log space: move the pair's logs toward each
    // other by lambda <= 1/2 of their gap. Sum of logs is unchanged.
    const int transfers = rng.uniform_int(0, 2 * depth);
    for (int t = 0; t < transfers; ++t) {
        const int i = rng.uniform_int(0, depth - 1);
        int j = rng.uniform_int(0, depth - 2);
        if (j >= i) ++j;
        const double lam = 0.5 * rng.uniform();
        const double d = logs[static_cast<std::size_t>(i)] - logs[static_cast<std::size_t>(j)];
        logs[static_cast<std::size_t>(i)] -= lam * d;
        logs[static_cast<std::size_t>(j)] += lam * d;
    }
    pair.u.resize(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i)
        pair.u[static_cast<std::size_t>(i)] = std::exp(logs[static_cast<std::size_t>(i)]);
    return pair;
}

SchurReport check_schur_lemma39(const OrderedPair& pair, double eta) {
    constexpr double kSlack = 1e-10;
    SchurReport rep;
    const WeightVector u(pair.u);
    const WeightVector v(pair.v);
    const double prod = u.product();

    rep.applicable[0] = true;
    const double s1u = scalar_net::s1(pair.u);
    const double s1v = scalar_net::s1(pair.v);
    rep.holds[0] = s1u <= s1v + kSlack * std::max(1.0, std::fabs(s1v));

    auto min_coord = [](const WeightVector& w) {
        double m = w[0];
        for (int i = 1; i < w.depth(); ++i) m = std::min(m, w[i]);
        return m;
    };
    if (prod >= 1.0 - 1e-12) {
        rep.applicable[1] = true;
        const double gu = min_coord(dynamics::gd_step(u, eta));
        const double gv = min_coord(dynamics::gd_step(v, eta));
        rep.holds[1] = -gu <= -gv + kSlack * std::max(1.0, std::fabs(gv));
    }
    if (prod <= 1.0 + 1e-12) {
        rep.applicable[2] = true;
        const double pu = dynamics::gd_step(u, eta).product();
        const double pv = dynamics::gd_step(v, eta).product();
        rep.holds[2] = pu <= pv + kSlack * std::max(1.0, std::fabs(pv));
    }
    return rep;
}

}  // namespace eos::order_theory
