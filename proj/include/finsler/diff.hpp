#pragma once

#include <optional>
#include <span>

#include "finsler/function.hpp"
#include "finsler/jet.hpp"

namespace finsler {

struct EngineOptions {
    /// Maximum derivative order for the automatic path (4 by default, 5 at most).
    int max_order = 4;
    /// Allow finite differences where the automatic path lacks depth.
    bool fd_fallback = true;

    /// Defaults overridden by FINSLER_MAX_ORDER when set.
    static EngineOptions from_environment();
};

/// Mixed partial of f at x via Taylor-mode arithmetic.
double partial(const Function& f, std::span<const double> x, const MultiIndex& idx,
               const EngineOptions& options = {});

/// Taylor jet of f at x up to `order`.
Jet taylor(const Function& f, std::span<const double> x, int order,
           const EngineOptions& options = {});

/// Default step for an fd_partial of the given total order: 1e-4 for first
/// derivatives, growing with order to keep round-off bounded.
double default_fd_step(int total_order);

/// Central-difference estimate of a mixed partial (total order <= 4) with one
/// Richardson level. Without `h` the step is default_fd_step(order)*(1+|x_v|)
/// per variable. Oracle only; independent of the jet path.
double fd_partial(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> x, const MultiIndex& idx,
                  std::optional<double> h = std::nullopt);

inline double fd_partial(const Function& f, std::span<const double> x, const MultiIndex& idx,
                         std::optional<double> h = std::nullopt) {
    return fd_partial([&f](std::span<const double> z) { return f(z); }, x, idx, h);
}

}  // namespace finsler
