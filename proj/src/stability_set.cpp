#include "eos/stability_set.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "eos/error.hpp"
#include "eos/qmap.hpp"

namespace eos::stability_set {

namespace {
constexpr int kGridPoints = 1024;
constexpr double kRefineTol = 1e-10;
constexpr double kScanFactor = 1.01;
constexpr double kScanCap = 1e6;
}  // namespace

const char* to_string(StabilityReport::Reason r) {
    switch (r) {
        case StabilityReport::Reason::none: return "none";
        case StabilityReport::Reason::sharpness_too_large: return "sharpness-too-large";
        case StabilityReport::Reason::product_nonpositive: return "product-nonpositive";
        case StabilityReport::Reason::no_valid_b: return "no-valid-B";
    }
    return "unknown";
}

double b_minus(const gf_exact::BalanceSignature& sig, double eta) {
    if (sig.product_sign != +1) throw SignError("b_minus requires a positive-product signature");

    std::vector<double> xs(kGridPoints);
    std::vector<double> qs(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i)
        xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (kGridPoints - 1);
    qmap::kernels().eval_grid(sig.depth, sig.offsets.data(), eta, xs.data(), qs.data(),
                              xs.size());

    int best = 0;
    for (int i = 1; i < kGridPoints; ++i)
        if (qs[static_cast<std::size_t>(i)] > qs[static_cast<std::size_t>(best)]) best = i;

    // Golden-section refinement of the best cell's neighborhood.
    double a = xs[static_cast<std::size_t>(best > 0 ? best - 1 : 0)];
    double b = xs[static_cast<std::size_t>(best < kGridPoints - 1 ? best + 1 : kGridPoints - 1)];
    const double invphi = 0.6180339887498949;
    double u_warm = -1.0;
    auto q_at = [&](double x) { return qmap::eval(sig.depth, sig.offsets.data(), eta, x, &u_warm); };
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = q_at(x1);
    double f2 = q_at(x2);
    while (b - a > kRefineTol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = q_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = q_at(x2);
        }
    }
    const double refined = f1 > f2 ? f1 : f2;
    double result = qs[static_cast<std::size_t>(best)] > refined
                        ? qs[static_cast<std::size_t>(best)]
                        : refined;
    return result > 1.0 ? result : 1.0;  // q(1) = 1 is always attainable
}

double b_plus(const gf_exact::BalanceSignature& sig, double eta) {
    if (sig.product_sign != +1) throw SignError("b_plus requires a positive-product signature");

    double u_warm = -1.0;
    auto h = [&](double x) {
        const double u = qmap::solve_base_square(sig.depth, sig.offsets.data(), x, u_warm);
        u_warm = u;
        return u - eta * (x - 1.0) * x;
    };

    double lo = 1.0;
    double h_lo = h(lo);  // u(1) > 0
    double hi = lo;
    bool bracketed = false;
    while (hi < kScanCap) {
        hi *= kScanFactor;
        const double h_hi = h(hi);
        if (h_hi <= 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        h_lo = h_hi;
    }
    if (!bracketed) return std::numeric_limits<double>::infinity();
    (void)h_lo;
    while (hi - lo > kRefineTol) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

StabilityReport in_stability_set(const WeightVector& w, double eta) {
    if (!(eta > 0.0)) throw DomainError("in_stability_set requires eta > 0");
    StabilityReport rep;
    rep.threshold = 2.0 * std::sqrt(2.0) / eta;

    const double pi = w.product();
    if (!(pi > 0.0)) {
        rep.member = false;
        rep.reason = StabilityReport::Reason::product_nonpositive;
        rep.b_minus = rep.b_plus = rep.gfs_sharpness = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }

    const gf_exact::BalanceSignature sig = gf_exact::signature(w);
    rep.gfs_sharpness = gf_exact::gfs_sharpness_of(sig);
    rep.b_minus = b_minus(sig, eta);
    rep.b_plus = b_plus(sig, eta);

    if (rep.gfs_sharpness > rep.threshold) {
        rep.member = false;
        rep.reason = StabilityReport::Reason::sharpness_too_large;
        return rep;
    }
    // A valid window needs some B > 1 with pi(w) < B <= b_plus and B > b_minus.
    const double floor = rep.b_minus > pi ? rep.b_minus : pi;
    if (rep.b_plus > floor && rep.b_plus > 1.0) {
        rep.member = true;
        rep.reason = StabilityReport::Reason::none;
    } else {
        rep.member = false;
        rep.reason = StabilityReport::Reason::no_valid_b;
    }
    return rep;
}

bool nesting_check(const WeightVector& w, double eta1, double eta2) {
    if (!(eta1 > eta2 && eta2 > 0.0))
        throw DomainError("nesting_check requires eta1 > eta2 > 0");
    if (!in_stability_set(w, eta1).member) return true;
    return in_stability_set(w, eta2).member;
}

}  // namespace eos::stability_set
