#include "eos/flow_integrator.hpp"

#include <cmath>

#include "eos/error.hpp"
#include "eos/scalar_net.hpp"

namespace eos::flow_integrator {

namespace {

Eigen::VectorXd deterministic_direction(int n) {
    // Fixed pseudo-random start; splitmix64 per index.
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        std::uint64_t z = 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 17);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        v[i] = static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
    }
    return v.normalized();
}

std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> hvp_or_fd(
    const LossOracle& oracle, const Eigen::VectorXd& w) {
    if (oracle.hvp) return oracle.hvp;
    const double h = 1e-5 * (1.0 + w.norm());
    return [grad = oracle.gradient, h](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
        return ((grad(x + h * v) - grad(x - h * v)) / (2.0 * h)).eval();
    };
}

}  // namespace

double top_eigenvalue(const LossOracle& oracle, const Eigen::VectorXd& w,
                      const EigParams& params) {
    const auto hvp = hvp_or_fd(oracle, w);

    // Spectral-radius estimate: power iteration on H, tracking ||Hv||.
    Eigen::VectorXd v = deterministic_direction(oracle.dimension);
    double rho = 0.0;
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd hv = hvp(w, v);
        const double norm = hv.norm();
        if (norm > rho) rho = norm;
        if (norm == 0.0) break;  // zero Hessian
        v = hv / norm;
    }
    if (rho == 0.0) return 0.0;
    const double shift = 1.25 * rho;

    // Power iteration on H + shift*I; its top eigenvalue is lambda_max + shift.
    v = deterministic_direction(oracle.dimension);
    double rayleigh = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < params.max_iters; ++it) {
        Eigen::VectorXd hv = hvp(w, v) + shift * v;
        rayleigh = v.dot(hv);
        if (std::fabs(rayleigh - prev) <= params.tol * std::max(1.0, std::fabs(rayleigh)))
            return rayleigh - shift;
        prev = rayleigh;
        const double norm = hv.norm();
        if (norm == 0.0) return -shift;  // v spans the -shift eigenspace
        v = hv / norm;
    }
    throw SolverError("top_eigenvalue: power iteration did not converge", rayleigh - shift);
}

FlowResult rk4_flow(const LossOracle& oracle, const Eigen::VectorXd& w0,
                    const FlowParams& params) {
    if (!(params.loss_threshold > 0.0)) throw DomainError("rk4_flow requires loss_threshold > 0");

    const auto grad = [&](const Eigen::VectorXd& x) { return oracle.gradient(x); };
    auto safe_top = [&](const Eigen::VectorXd& x) {
        try {
            return top_eigenvalue(oracle, x);
        } catch (const SolverError& e) {
            return e.best_estimate;
        }
    };

    FlowResult res;
    Eigen::VectorXd w = w0;
    double loss = oracle.value(w);
    double lam = safe_top(w);
    auto base_dt = [&]() {
        const double mag = std::fabs(lam);
        const double dt = params.step_scale / (mag > 1e-30 ? mag : 1e-30);
        return std::clamp(dt, params.dt_min, params.dt_max);
    };
    double dt = base_dt();

    long steps = 0;
    while (steps < params.max_steps) {
        if (loss <= params.loss_threshold) {
            res.status = FlowStatus::success;
            break;
        }
        if (steps > 0 && steps % params.refresh_every == 0) {
            lam = safe_top(w);
            dt = base_dt();
        }
        const Eigen::VectorXd k1 = -grad(w);
        const Eigen::VectorXd k2 = -grad(w + (0.5 * dt) * k1);
        const Eigen::VectorXd k3 = -grad(w + (0.5 * dt) * k2);
        const Eigen::VectorXd k4 = -grad(w + dt * k3);
        const Eigen::VectorXd wn = w + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double ln = oracle.value(wn);
        if (!std::isfinite(ln)) {
            if (dt <= params.dt_min) {
                res.status = FlowStatus::failed;
                break;
            }
            dt = std::max(0.5 * dt, params.dt_min);
            continue;
        }
        if (ln > loss + 1e-12) {
            if (dt <= params.dt_min) {
                res.status = FlowStatus::failed;
                break;
            }
            dt = std::max(0.5 * dt, params.dt_min);
            continue;
        }
        w = wn;
        loss = ln;
        ++steps;
    }
    if (steps >= params.max_steps && loss > params.loss_threshold)
        res.status = FlowStatus::timeout;

    res.terminal = w;
    res.terminal_loss = loss;
    res.steps = steps;
    res.top_eigenvalue = safe_top(w);
    return res;
}

LossOracle scalar_net_oracle(int depth) {
    LossOracle o;
    o.dimension = depth;
    auto to_wv = [](const Eigen::VectorXd& x) {
        return WeightVector(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    };
    o.value = [to_wv](const Eigen::VectorXd& x) { return scalar_net::loss(to_wv(x)); };
    o.gradient = [to_wv](const Eigen::VectorXd& x) { return scalar_net::gradient(to_wv(x)); };
    o.hvp = [to_wv](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
        return (scalar_net::hessian(to_wv(x)) * v).eval();
    };
    return o;
}

}  // namespace eos::flow_integrator
