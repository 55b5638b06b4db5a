#include "finsler/sampling.hpp"

#include <cmath>

namespace finsler {

std::vector<TangentPoint> sample_points(const MetricSpec& spec, int count, std::uint64_t seed,
                                        double radius_fraction) {
    if (count <= 0) throw InvalidParameter("sample count must be positive");
    const int n = spec.dim();
    const double r = radius_fraction * spec.domain_radius().value_or(1.0);
    UniformSource src(seed);
    std::vector<TangentPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 1000 * count) throw DomainError("could not sample admissible points");
        TangentPoint tp{std::vector<double>(static_cast<std::size_t>(n)),
                        std::vector<double>(static_cast<std::size_t>(n))};
        double xx = 0.0, yy = 0.0;
        for (auto& v : tp.x) {
            v = src.uniform(-r, r);
            xx += v * v;
        }
        for (auto& v : tp.y) {
            v = src.uniform(-1.0, 1.0);
            yy += v * v;
        }
        if (xx > r * r || yy < 0.01) continue;
        try {
            spec.check_admissible(tp);
        } catch (const DomainError&) {
            continue;
        }
        out.push_back(std::move(tp));
    }
    return out;
}

std::vector<double> sample_transverse(UniformSource& src, std::span<const double> y) {
    const std::size_t n = y.size();
    double yy = 0.0;
    for (double v : y) yy += v * v;
    while (true) {
        std::vector<double> X(n);
        double xx = 0.0, xy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            X[i] = src.uniform(-1.0, 1.0);
            xx += X[i] * X[i];
            xy += X[i] * y[i];
        }
        if (xx < 0.01) continue;
        const double c = std::abs(xy) / std::sqrt(xx * yy);
        if (c < std::cos(0.2)) return X;
    }
}

}  // namespace finsler
