#include "eos/bifurcation.hpp"

#include <cmath>

#include "eos/error.hpp"
#include "eos/qmap.hpp"

namespace eos::bifurcation {

namespace {

void validate(const PeriodicParams& p, double x0) {
    if (!(p.burn_in >= p.tail && p.tail >= 1))
        throw DomainError("periodic_set requires burn_in >= tail >= 1");
    if (!(x0 > 0.0)) throw DomainError("periodic_set requires x0 > 0");
}

/// Runs a batch of chains (shared depth, per-chain offsets already
/// coordinate-major) and fills periods/tails. Returns per-lane divergence.
struct BatchResult {
    std::vector<double> tail;  // tail_len rows, lane-major
    std::vector<unsigned char> alive;
    std::vector<long> death_step;
};

BatchResult run_chains(int depth, const std::vector<double>& offs_cm, std::size_t n, double eta,
                       std::vector<double>& x, std::vector<double>& u,
                       const PeriodicParams& params) {
    BatchResult r;
    const long tail_len = params.tail < params.burn_in ? params.tail : params.burn_in;
    r.tail.assign(static_cast<std::size_t>(tail_len) * n, 0.0);
    r.alive.assign(n, 0);
    r.death_step.assign(n, -1);
    qmap::kernels().iterate_chains(depth, offs_cm.data(), n, eta, x.data(), u.data(),
                                   params.burn_in, params.divergence_bound, r.tail.data(),
                                   tail_len, r.alive.data(), r.death_step.data());
    return r;
}

std::vector<double> lane_tail(const BatchResult& r, std::size_t n, std::size_t lane) {
    const std::size_t rows = r.tail.size() / n;
    std::vector<double> t(rows);
    for (std::size_t s = 0; s < rows; ++s) t[s] = r.tail[s * n + lane];
    return t;
}

}  // namespace

int classify_period(std::span<const double> tail, int max_period, double tol) {
    const long n = static_cast<long>(tail.size());
    for (int p = 1; p <= max_period && p < n; ++p) {
        bool ok = true;
        for (long k = 0; k + p < n; ++k) {
            if (std::fabs(tail[static_cast<std::size_t>(k + p)] -
                          tail[static_cast<std::size_t>(k)]) >= tol) {
                ok = false;
                break;
            }
        }
        if (ok) return p;
    }
    return kChaotic;
}

BifurcationSample periodic_set(const gf_exact::BalanceSignature& sig, double eta, double x0,
                               const PeriodicParams& params) {
    validate(params, x0);
    std::vector<double> offs_cm(static_cast<std::size_t>(sig.depth));
    for (int c = 0; c < sig.depth; ++c)
        offs_cm[static_cast<std::size_t>(c)] = sig.offsets[static_cast<std::size_t>(c)];
    std::vector<double> x{x0};
    std::vector<double> u{-1.0};
    BatchResult r = run_chains(sig.depth, offs_cm, 1, eta, x, u, params);
    if (!r.alive[0])
        throw DivergedError("periodic_set: iterate left (0, divergence_bound) at step " +
                            std::to_string(r.death_step[0]));

    BifurcationSample s;
    s.gfs_sharpness = gf_exact::gfs_sharpness_of(sig);
    s.x0 = x0;
    const std::vector<double> t = lane_tail(r, 1, 0);
    s.period = classify_period(t, params.max_period, params.period_tol);
    if (s.period > 0)
        s.periodic_products.assign(t.end() - s.period, t.end());
    else
        s.periodic_products = t;
    return s;
}

std::vector<BifurcationSample> diagram_along_trajectory(const dynamics::Trajectory& traj,
                                                        const PeriodicParams& params) {
    struct Source {
        const dynamics::TrajectoryRecord* rec;
        gf_exact::BalanceSignature sig;
    };
    std::vector<Source> sources;
    for (const auto& rec : traj.records) {
        if (!rec.w.has_value() || !(rec.product > 0.0)) continue;
        sources.push_back({&rec, gf_exact::signature(*rec.w)});
    }

    std::vector<BifurcationSample> out(sources.size());
    constexpr std::size_t kBatch = 64;
    for (std::size_t base = 0; base < sources.size(); base += kBatch) {
        const std::size_t n = std::min(kBatch, sources.size() - base);
        const int depth = traj.depth;
        std::vector<double> offs_cm(static_cast<std::size_t>(depth) * n);
        std::vector<double> x(n);
        std::vector<double> u(n);
        for (std::size_t lane = 0; lane < n; ++lane) {
            const Source& src = sources[base + lane];
            for (int c = 0; c < depth; ++c)
                offs_cm[static_cast<std::size_t>(c) * n + lane] =
                    src.sig.offsets[static_cast<std::size_t>(c)];
            x[lane] = src.rec->product;
            // The base square of the current iterate is its smallest square.
            u[lane] = src.rec->w->squares()[src.sig.perm[static_cast<std::size_t>(depth - 1)]];
        }
        std::vector<double> x_run = x;
        BatchResult r = run_chains(depth, offs_cm, n, traj.eta, x_run, u, params);
        for (std::size_t lane = 0; lane < n; ++lane) {
            BifurcationSample& s = out[base + lane];
            s.gfs_sharpness = sources[base + lane].rec->gfs_sharpness;
            s.x0 = x[lane];
            if (!r.alive[lane]) {
                s.diverged = true;
                s.period = kChaotic;
                continue;
            }
            const std::vector<double> t = lane_tail(r, n, lane);
            s.period = classify_period(t, params.max_period, params.period_tol);
            if (s.period > 0)
                s.periodic_products.assign(t.end() - s.period, t.end());
            else
                s.periodic_products = t;
        }
    }

    // Flag samples whose phi sits within 1% of a period change between
    // neighboring samples; the diagram is least trustworthy there.
    auto klass = [&](const BifurcationSample& s) { return s.diverged ? -1 : s.period; };
    std::vector<double> boundaries;
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
        if (klass(out[i]) != klass(out[i + 1]))
            boundaries.push_back(0.5 * (out[i].gfs_sharpness + out[i + 1].gfs_sharpness));
    for (auto& s : out)
        for (double b : boundaries)
            if (std::fabs(s.gfs_sharpness - b) <= 0.01 * std::fabs(b)) {
                s.near_doubling = true;
                break;
            }
    return out;
}

}  // namespace eos::bifurcation
