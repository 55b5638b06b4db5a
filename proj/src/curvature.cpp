#include "finsler/curvature.hpp"

#include <cmath>

namespace finsler {

namespace {

constexpr int kCurvatureDepth = 4;

PointGeometry curvature_geometry(const MetricSpec& spec, const TangentPoint& tp,
                                 const EngineOptions& options) {
    return compute_geometry(spec, tp, kCurvatureDepth, options);
}

void require_curvature(const PointGeometry& geo) {
    if (!geo.has_curvature()) throw InvalidParameter("geometry was computed without curvature depth");
}

std::vector<double> lowered(const PointGeometry& geo, std::span<const double> v) {
    return lower_index(geo.g, v);
}

}  // namespace

Tensor cartan_hh(const PointGeometry& geo) {
    require_curvature(geo);
    const int n = geo.n;
    Tensor out = geo.chern;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) {
                    double s = 0.0;
                    for (int q = 0; q < n; ++q) s += geo.spray_curv(q, k, m) * geo.cartan(i, q, j);
                    out(i, j, k, m) += s;
                }
    return out;
}

Tensor riemann_operator(const PointGeometry& geo) {
    require_curvature(geo);
    const int n = geo.n;
    Tensor out(n, {Variance::upper, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += geo.tp.y[static_cast<std::size_t>(j)] * geo.spray_curv(i, j, k);
            out(i, k) = s;
        }
    return out;
}

Tensor ricci_trace_alt(const PointGeometry& geo) {
    require_curvature(geo);
    const int n = geo.n;
    Tensor out(n, {Variance::upper, Variance::lower});
    for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += geo.ginv(i, j) * geo.chern(h, i, j, k);
            out(h, k) = s;
        }
    return out;
}

double flag_curvature(const PointGeometry& geo, std::span<const double> X) {
    require_curvature(geo);
    const int n = geo.n;
    if (static_cast<int>(X.size()) != n) throw InvalidParameter("flag vector has wrong dimension");
    const auto& y = geo.tp.y;
    const double gxx = inner(geo.g, X, X);
    const double gyy = inner(geo.g, y, y);
    const double gxy = inner(geo.g, X, y);
    const double den = gxx * gyy - gxy * gxy;
    if (!(den > 1e-10 * gxx * gyy)) {
        throw DegenerateFlag("flag vector is (nearly) parallel to the flagpole");
    }
    const Tensor R = riemann_operator(geo);
    const auto Xl = lowered(geo, X);
    double num = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) num += Xl[static_cast<std::size_t>(i)] * R(i, k) * X[static_cast<std::size_t>(k)];
    return num / den;
}

Tensor chern_hh(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return curvature_geometry(spec, tp, options).chern;
}

Tensor spray_curvature(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return curvature_geometry(spec, tp, options).spray_curv;
}

Tensor cartan_hh(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return cartan_hh(curvature_geometry(spec, tp, options));
}

Tensor riemann_operator(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return riemann_operator(curvature_geometry(spec, tp, options));
}

Tensor ricci_trace_alt(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return ricci_trace_alt(curvature_geometry(spec, tp, options));
}

double ricci_scalar(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return curvature_geometry(spec, tp, options).ricci;
}

Tensor ricci_tensor(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    if (!options.fd_fallback) {
        throw OrderOverflow("ricci tensor needs derivative depth 6; enable the finite-difference fallback");
    }
    spec.check_admissible(tp);
    const int n = spec.dim();
    double ynorm = 0.0;
    for (double v : tp.y) ynorm += v * v;
    const double h = 1e-3 * std::sqrt(ynorm);
    Tensor out(n, {Variance::lower, Variance::lower});

    const auto at_y = [&](std::span<const double> y) {
        return TangentPoint{tp.x, std::vector<double>(y.begin(), y.end())};
    };

    if (options.max_order >= 5) {
        const auto grad_component = [&](int i) {
            return [&, i](std::span<const double> y) {
                return compute_geometry(spec, at_y(y), 5, options).ricci_grad_y[static_cast<std::size_t>(i)];
            };
        };
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out(i, j) = 0.5 * fd_partial(grad_component(i), tp.y, MultiIndex::unit(n, j), h);
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double s = 0.5 * (out(i, j) + out(j, i));
                out(i, j) = s;
                out(j, i) = s;
            }
        return out;
    }

    const auto ric = [&](std::span<const double> y) {
        return compute_geometry(spec, at_y(y), kCurvatureDepth, options).ricci;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            std::vector<int> orders(static_cast<std::size_t>(n), 0);
            orders[static_cast<std::size_t>(i)] += 1;
            orders[static_cast<std::size_t>(j)] += 1;
            const double v = 0.5 * fd_partial(ric, tp.y, MultiIndex(orders), h);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

double flag_curvature(const MetricSpec& spec, const TangentPoint& tp, std::span<const double> X,
                      const EngineOptions& options) {
    return flag_curvature(curvature_geometry(spec, tp, options), X);
}

CurvatureData curvature_data(const MetricSpec& spec, const TangentPoint& tp, bool with_ricci_tensor,
                             const EngineOptions& options) {
    const PointGeometry geo = curvature_geometry(spec, tp, options);
    CurvatureData d;
    d.chern = geo.chern;
    d.cartan_hh = cartan_hh(geo);
    d.spray_curvature = geo.spray_curv;
    d.riemann = riemann_operator(geo);
    d.ricci_alt = ricci_trace_alt(geo);
    d.ricci = geo.ricci;
    if (with_ricci_tensor) d.ricci_tensor = ricci_tensor(spec, tp, options);
    return d;
}

}  // namespace finsler
