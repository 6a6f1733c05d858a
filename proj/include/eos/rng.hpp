#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eos {

/// Deterministic RNG with library-owned distributions, so that streams are
/// stable across standard-library versions. Not thread-safe; parallel users
/// take independent child streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Independent stream derived from (seed, stream index).
    static Rng child(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 of the pair; decorrelates neighboring streams.
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(eng_() % range);
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    /// Uniform in [lo, hi] excluding a symmetric band around zero.
    double uniform_nonzero(double lo, double hi, double min_abs = 1e-3) {
        for (;;) {
            const double v = uniform(lo, hi);
            if (std::fabs(v) >= min_abs) return v;
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace eos
