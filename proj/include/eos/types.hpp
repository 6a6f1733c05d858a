#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "eos/error.hpp"

namespace eos {

/// Depths beyond this overflow the symmetric-function magnitudes in double
/// precision, so construction rejects them.
inline constexpr int kMaxDepth = 16;
inline constexpr int kMinDepth = 2;

/// Parameter vector of a depth-D scalar network, D in [2, 16].
/// Entries must be finite; zero entries are legal.
class WeightVector {
public:
    WeightVector(std::span<const double> entries) { init(entries); }
    WeightVector(std::initializer_list<double> entries) {
        init(std::span<const double>(entries.begin(), entries.size()));
    }
    WeightVector(const std::vector<double>& entries) {
        init(std::span<const double>(entries.data(), entries.size()));
    }

    int depth() const { return depth_; }
    double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return w_[static_cast<std::size_t>(i)]; }
    std::span<const double> entries() const { return {w_.data(), static_cast<std::size_t>(depth_)}; }

    auto begin() const { return w_.begin(); }
    auto end() const { return w_.begin() + depth_; }

    /// Coordinate product pi(w).
    double product() const {
        double p = 1.0;
        for (int i = 0; i < depth_; ++i) p *= w_[static_cast<std::size_t>(i)];
        return p;
    }

    std::array<double, kMaxDepth> squares() const {
        std::array<double, kMaxDepth> sq{};
        for (int i = 0; i < depth_; ++i) {
            const double v = w_[static_cast<std::size_t>(i)];
            sq[static_cast<std::size_t>(i)] = v * v;
        }
        return sq;
    }

    bool operator==(const WeightVector& o) const {
        if (depth_ != o.depth_) return false;
        for (int i = 0; i < depth_; ++i)
            if (w_[static_cast<std::size_t>(i)] != o.w_[static_cast<std::size_t>(i)]) return false;
        return true;
    }

private:
    void init(std::span<const double> entries) {
        if (entries.size() < static_cast<std::size_t>(kMinDepth) ||
            entries.size() > static_cast<std::size_t>(kMaxDepth))
            throw DomainError("weight vector depth must be in [2, 16], got " +
                              std::to_string(entries.size()));
        depth_ = static_cast<int>(entries.size());
        for (int i = 0; i < depth_; ++i) {
            if (!std::isfinite(entries[static_cast<std::size_t>(i)]))
                throw DomainError("weight vector entries must be finite");
            w_[static_cast<std::size_t>(i)] = entries[static_cast<std::size_t>(i)];
        }
    }

    std::array<double, kMaxDepth> w_{};
    int depth_ = 0;
};

/// Values s_0..s_D where s_m is the elementary symmetric polynomial of
/// degree D-m in the squared weights. s_D == 1, s_0 == pi(w)^2.
struct SymmetricValues {
    int depth = 0;
    std::array<double, kMaxDepth + 1> s{};

    double operator[](int m) const { return s[static_cast<std::size_t>(m)]; }
};

}  // namespace eos
