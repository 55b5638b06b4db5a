#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Deterministic draws in [0, 1) that do not depend on the standard library's
/// distribution implementation.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed = kDefaultSeed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 rng_;
};

/// Admissible points with x uniform in the ball of radius
/// radius_fraction * domain radius (1 for unbounded charts) and y uniform in
/// [-1, 1]^n with |y| >= 0.1.
std::vector<TangentPoint> sample_points(const MetricSpec& spec, int count,
                                        std::uint64_t seed = kDefaultSeed,
                                        double radius_fraction = 0.7);

/// Random vector not within 0.2 rad of being parallel to y.
std::vector<double> sample_transverse(UniformSource& src, std::span<const double> y);

}  // namespace finsler
