#include "finsler/diff.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace finsler {

EngineOptions EngineOptions::from_environment() {
    EngineOptions options;
    if (const char* env = std::getenv("FINSLER_MAX_ORDER"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > kHardMaxOrder) {
            throw InvalidParameter("FINSLER_MAX_ORDER must be an integer in 1.." +
                                   std::to_string(kHardMaxOrder));
        }
        options.max_order = static_cast<int>(v);
    }
    return options;
}

Jet taylor(const Function& f, std::span<const double> x, int order,
           const EngineOptions& options) {
    if (order > options.max_order) {
        throw OrderOverflow("derivative order " + std::to_string(order) +
                            " exceeds configured maximum " + std::to_string(options.max_order));
    }
    const auto z = Jet::seed(x, order);
    return f(std::span<const Jet>(z));
}

double partial(const Function& f, std::span<const double> x, const MultiIndex& idx,
               const EngineOptions& options) {
    if (idx.size() != static_cast<int>(x.size())) {
        throw InvalidParameter("multi-index size does not match the point dimension");
    }
    const Jet j = taylor(f, x, idx.total(), options);
    const double v = j.derivative(idx);
    if (!std::isfinite(v)) throw DomainError("derivative undefined at evaluation point");
    return v;
}

double default_fd_step(int total_order) {
    switch (total_order) {
        case 0:
        case 1: return 1e-4;
        case 2: return 1e-3;
        case 3: return 5e-3;
        default: return 1e-2;
    }
}

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Tensor product of central difference operators with steps h[v].
double central_stencil(const std::function<double(std::span<const double>)>& f,
                       std::span<const double> x, const std::vector<int>& orders,
                       const std::vector<double>& h) {
    std::vector<int> active;
    for (std::size_t v = 0; v < orders.size(); ++v) {
        if (orders[v] > 0) active.push_back(static_cast<int>(v));
    }
    std::vector<double> point(x.begin(), x.end());
    std::vector<int> j(active.size(), 0);
    double sum = 0.0;
    while (true) {
        double weight = 1.0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const auto v = static_cast<std::size_t>(active[a]);
            const int k = orders[v];
            const int jj = j[a];
            weight *= ((jj % 2 == 0) ? 1.0 : -1.0) * binomial(k, jj);
            point[v] = x[v] + (0.5 * k - jj) * h[v];
        }
        sum += weight * f(point);
        std::size_t a = 0;
        for (; a < active.size(); ++a) {
            if (++j[a] <= orders[static_cast<std::size_t>(active[a])]) break;
            j[a] = 0;
        }
        if (a == active.size()) break;
    }
    double scale = 1.0;
    for (int v : active) {
        scale *= std::pow(h[static_cast<std::size_t>(v)], orders[static_cast<std::size_t>(v)]);
    }
    return sum / scale;
}

}  // namespace

double fd_partial(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> x, const MultiIndex& idx, std::optional<double> h) {
    if (idx.size() != static_cast<int>(x.size())) {
        throw InvalidParameter("multi-index size does not match the point dimension");
    }
    const int order = idx.total();
    if (order > 4) throw OrderOverflow("fd_partial supports total order <= 4");
    if (h && !(*h > 0.0)) throw InvalidParameter("finite-difference step must be positive");
    if (order == 0) return f(x);

    std::vector<double> step(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) {
        step[v] = h ? *h : default_fd_step(order) * (1.0 + std::abs(x[v]));
    }
    std::vector<double> half(step);
    for (double& s : half) s *= 0.5;
    const double coarse = central_stencil(f, x, idx.orders(), step);
    const double fine = central_stencil(f, x, idx.orders(), half);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace finsler
