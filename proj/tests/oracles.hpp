#pragma once
// Reference values computed without the jet pipeline.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace oracle {

using Fn = std::function<double(std::span<const double>)>;

/// Mixed partial by nested central differences with one Richardson level per
/// variable. vars lists variable indices, e.g. {0, 2} for d/dz0 d/dz2.
inline double fd(const Fn& f, std::vector<double> z, std::vector<int> vars, double h = 1e-2) {
    if (vars.empty()) return f(z);
    const int v = vars.back();
    vars.pop_back();
    const auto central = [&](double step) {
        std::vector<double> zp = z, zm = z;
        zp[static_cast<std::size_t>(v)] += step;
        zm[static_cast<std::size_t>(v)] -= step;
        return (fd(f, zp, vars, h) - fd(f, zm, vars, h)) / (2.0 * step);
    };
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

/// Conformally flat a_ij = e^{2u} δ_ij: Γ^i_jk = δ^i_j u_k + δ^i_k u_j - δ_jk u_i.
inline finsler::Tensor conformal_christoffel(const std::vector<double>& du) {
    const int n = static_cast<int>(du.size());
    using finsler::Variance;
    finsler::Tensor G(n, {Variance::upper, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = 0.0;
                if (i == j) v += du[static_cast<std::size_t>(k)];
                if (i == k) v += du[static_cast<std::size_t>(j)];
                if (j == k) v -= du[static_cast<std::size_t>(i)];
                G(i, j, k) = v;
            }
    return G;
}

/// du for the stereographic sphere, u = log 2 - log(1 + |x|^2) - log(kappa)/2.
inline std::vector<double> sphere_du(std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    std::vector<double> du;
    for (double v : x) du.push_back(-2.0 * v / (1.0 + r2));
    return du;
}

/// du for the Poincaré ball, u = log 2 - log(1 - |x|^2) - log(kappa)/2.
inline std::vector<double> hyperbolic_du(std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    std::vector<double> du;
    for (double v : x) du.push_back(2.0 * v / (1.0 - r2));
    return du;
}

/// Funk metric of the unit ball: F solves |x + y/F| = 1.
inline double funk_implicit_residual(std::span<const double> x, std::span<const double> y, double F) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = x[i] + y[i] / F;
        s += c * c;
    }
    return std::sqrt(s) - 1.0;
}

/// Funk F by bisection on the implicit equation.
inline double funk_by_bisection(std::span<const double> x, std::span<const double> y) {
    double lo = 1e-12, hi = 1.0;
    while (funk_implicit_residual(x, y, hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (funk_implicit_residual(x, y, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Space form of curvature kappa: R^i_jkm = kappa (g_jk δ^i_m - g_jm δ^i_k).
inline finsler::Tensor space_form_chern(const finsler::Tensor& g, double kappa) {
    const int n = g.dim();
    using finsler::Variance;
    finsler::Tensor R(n, {Variance::upper, Variance::lower, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m)
                    R(i, j, k, m) = kappa * (g(j, k) * (i == m) - g(j, m) * (i == k));
    return R;
}

/// Spray from values of F^2 only:
/// G^i = 1/4 g^il (∂x_k ∂y_l F^2 y^k - ∂x_l F^2), all derivatives by finite differences.
inline std::vector<double> spray_fd(const Fn& F2, const finsler::TangentPoint& tp) {
    const int n = tp.dim();
    const std::vector<double> z = tp.joined();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = 0.5 * fd(F2, z, {n + i, n + j});
    Eigen::VectorXd rhs(n);
    for (int l = 0; l < n; ++l) {
        double s = -fd(F2, z, {l});
        for (int k = 0; k < n; ++k) s += fd(F2, z, {k, n + l}) * tp.y[static_cast<std::size_t>(k)];
        rhs(l) = s;
    }
    const Eigen::VectorXd G = 0.25 * g.ldlt().solve(rhs);
    return {G.data(), G.data() + n};
}

}  // namespace oracle
