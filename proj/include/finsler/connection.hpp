#pragma once

#include <functional>
#include <span>
#include <vector>

#include "finsler/diff.hpp"
#include "finsler/geometry.hpp"
#include "finsler/metric.hpp"

namespace finsler {

/// Smooth real function of x (arity n).
using ScalarField = Function;
/// Vector field of x, one component Function per coordinate.
using VectorField = std::vector<Function>;
/// Tensor-valued field on the slit tangent bundle; variance is read off the result.
using TensorField = std::function<Tensor(const TangentPoint&)>;

struct ConnectionData {
    Tensor spray;        // G^i
    Tensor nonlinear;    // G^i_j
    Tensor christoffel;  // Γ^i_jk
    Tensor cartan;       // C^i_jk
    Tensor cartan_low;   // C_ijk
    Tensor formal;       // γ^i_jk
};

Tensor spray(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
Tensor nonlinear_connection(const MetricSpec& spec, const TangentPoint& tp,
                            const EngineOptions& options = {});
ConnectionData cartan_coefficients(const MetricSpec& spec, const TangentPoint& tp,
                                   const EngineOptions& options = {});
ConnectionData connection_data(const PointGeometry& geo);

/// δf/δx^k = ∂f/∂x^k - G^j_k ∂f/∂y^j for f a Function of (x, y).
double delta_x(const MetricSpec& spec, const Function& f, const TangentPoint& tp, int k,
               const EngineOptions& options = {});

/// Cartan horizontal covariant derivative; the new lower slot is appended last.
Tensor h_covariant(const MetricSpec& spec, const TensorField& T, const TangentPoint& tp,
                   const EngineOptions& options = {});
/// Vertical covariant derivative with C-terms; new slot appended last.
Tensor v_covariant(const MetricSpec& spec, const TensorField& T, const TangentPoint& tp,
                   const EngineOptions& options = {});

struct GradientOptions {
    double damping = 0.5;
    double tolerance = 1e-12;
    int max_iterations = 200;
};

/// grad h at x: the fixed point v = g^{-1}(x, v) dh. Zero if dh = 0.
/// Throws NonConvergence.
std::vector<double> gradient(const MetricSpec& spec, const ScalarField& h, std::span<const double> x,
                             const GradientOptions& gopts = {}, const EngineOptions& options = {});

/// Hess(h)_ij = ∂_i∂_j h - (Γ^k_ij + C^k_ij) ∂_k h at tp.
Tensor hessian(const MetricSpec& spec, const ScalarField& h, const TangentPoint& tp,
               const EngineOptions& options = {});
Tensor hessian(const PointGeometry& geo, const ScalarField& h);
double laplacian(const MetricSpec& spec, const ScalarField& h, const TangentPoint& tp,
                 const EngineOptions& options = {});

double div_h(const MetricSpec& spec, const VectorField& Y, const TangentPoint& tp,
             const EngineOptions& options = {});
double div_v(const MetricSpec& spec, const VectorField& Y, const TangentPoint& tp,
             const EngineOptions& options = {});

}  // namespace finsler
