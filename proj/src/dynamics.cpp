#include "eos/dynamics.hpp"

#include <cmath>

#include "eos/error.hpp"
#include "eos/qmap.hpp"
#include "eos/scalar_net.hpp"

namespace eos::dynamics {

WeightVector gd_step(const WeightVector& w, double eta) {
    if (!(eta > 0.0)) throw DomainError("gd_step requires eta > 0");
    const double r = w.product() - 1.0;
    const Eigen::VectorXd loo = scalar_net::leave_one_out(w);
    std::array<double, kMaxDepth> out{};
    for (int i = 0; i < w.depth(); ++i)
        out[static_cast<std::size_t>(i)] = w[i] - eta * (r * loo[i]);
    return WeightVector(std::span<const double>(out.data(), static_cast<std::size_t>(w.depth())));
}

double predicted_product_step(const gf_exact::BalanceSignature& sig, double x, double eta) {
    if (!(x > 0.0)) throw DomainError("predicted_product_step requires x > 0");
    return qmap::eval(sig.depth, sig.offsets.data(), eta, x, nullptr);
}

Eigen::MatrixXd predicted_balance_step(const WeightVector& w, double eta) {
    const int d = w.depth();
    const double pi = w.product();
    const double s = eta * (pi - 1.0);
    const auto sq = w.squares();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            double p2 = 1.0;  // prod_{k != i,j} w_k
            for (int k = 0; k < d; ++k)
                if (k != i && k != j) p2 *= w[k];
            const double factor = 1.0 - (s * p2) * (s * p2);
            b(i, j) = (sq[static_cast<std::size_t>(i)] - sq[static_cast<std::size_t>(j)]) * factor;
        }
    }
    return b;
}

WeightVector gpgd_step(const WeightVector& w, double eta) {
    if (!(w.product() > 0.0)) throw SignError("gpgd_step requires pi(w) > 0");
    const double xn = gd_step(w, eta).product();
    if (!(xn > 0.0)) throw SignError("gpgd_step: GD step left the positive-product region");
    return gf_exact::weight_from_product(gf_exact::signature(w), xn);
}

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::running: return "running";
        case RunStatus::converged: return "converged";
        case RunStatus::diverged: return "diverged";
        case RunStatus::max_steps: return "max_steps";
    }
    return "unknown";
}

Trajectory run(MapKind map, const WeightVector& w0, const RunParams& params) {
    if (params.max_steps < 1) throw DomainError("run requires max_steps >= 1");
    if (params.loss_threshold < 0.0) throw DomainError("run requires loss_threshold >= 0");
    if (!(params.divergence_bound > 1.0)) throw DomainError("run requires divergence_bound > 1");
    if (!(params.eta > 0.0)) throw DomainError("run requires eta > 0");

    Trajectory traj;
    traj.eta = params.eta;
    traj.depth = w0.depth();

    WeightVector w = w0;
    auto record = [&](long t, bool force_weights) {
        TrajectoryRecord rec;
        rec.t = t;
        rec.loss = scalar_net::loss(w);
        rec.sharpness = scalar_net::sharpness(w);
        rec.product = w.product();
        rec.gfs_sharpness = rec.product > 0.0
                                ? gf_exact::gfs_sharpness_of(gf_exact::signature(w))
                                : std::numeric_limits<double>::quiet_NaN();
        if (force_weights || t % params.weights_every == 0) rec.w = w;
        traj.records.push_back(std::move(rec));
    };

    for (long t = 0;; ++t) {
        const double loss = scalar_net::loss(w);
        const double pi = w.product();
        const bool due = (t % params.record_every == 0) || t == params.max_steps;

        if (!std::isfinite(pi) || std::fabs(pi) > params.divergence_bound) {
            traj.status = RunStatus::diverged;
            traj.status_reason = "product left the divergence bound";
            record(t, true);
            break;
        }
        if (loss < params.loss_threshold) {
            traj.status = RunStatus::converged;
            record(t, true);
            break;
        }
        if (t == params.max_steps) {
            traj.status = RunStatus::max_steps;
            record(t, true);
            break;
        }
        if (due) record(t, t == 0);

        try {
            w = (map == MapKind::gd) ? gd_step(w, params.eta) : gpgd_step(w, params.eta);
        } catch (const SignError& e) {
            traj.status = RunStatus::diverged;
            traj.status_reason = e.what();
            record(t, true);  // the pre-step iterate is the last valid one
            break;
        }
    }
    return traj;
}

}  // namespace eos::dynamics
