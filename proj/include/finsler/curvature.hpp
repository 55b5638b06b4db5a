#pragma once

#include <optional>
#include <span>

#include "finsler/diff.hpp"
#include "finsler/geometry.hpp"
#include "finsler/metric.hpp"

namespace finsler {

/// Conventions:
///   R^i_jkm = δ_m Γ^i_jk - δ_k Γ^i_jm + Γ^i_sm Γ^s_jk - Γ^i_sk Γ^s_jm
///   R^i_km  = δ_m G^i_k - δ_k G^i_m      (= y^j R^i_jkm)
///   R^i_k   = y^j R^i_jk                 (Riemann operator, R^i_{0k})
/// With these, a space of constant curvature κ has
/// R^i_jkm = κ(g_jk δ^i_m - g_jm δ^i_k) and R^i_k = κ F^2 (δ^i_k - l^i l_k).
struct CurvatureData {
    Tensor chern;            // R^i_jkm
    Tensor cartan_hh;        // *R^i_jkm
    Tensor spray_curvature;  // R^i_km
    Tensor riemann;          // R^i_k
    Tensor ricci_alt;        // g^ij R^h_ijk
    double ricci = 0.0;      // R^s_s
    std::optional<Tensor> ricci_tensor;
};

Tensor chern_hh(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
Tensor spray_curvature(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
Tensor cartan_hh(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
Tensor riemann_operator(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
/// The g-trace R^h_k = g^ij R^h_ijk, for comparison with riemann_operator.
Tensor ricci_trace_alt(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
double ricci_scalar(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});

/// Ric_ij = 1/2 ∂²(R^s_s)/∂y^i∂y^j, so that Ric_ij y^i y^j = Ric.
/// At max_order 4 the y-Hessian is a central difference of Ric with step
/// 1e-3|y|; at max_order 5 the first y-derivative comes from the jets and
/// only the second is differenced. Throws OrderOverflow when fd_fallback is off.
Tensor ricci_tensor(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});

/// κ(y, X). Throws DegenerateFlag when X is (nearly) parallel to y.
double flag_curvature(const MetricSpec& spec, const TangentPoint& tp, std::span<const double> X,
                      const EngineOptions& options = {});

CurvatureData curvature_data(const MetricSpec& spec, const TangentPoint& tp,
                             bool with_ricci_tensor = false, const EngineOptions& options = {});

// Pieces from an already computed depth-4 geometry.
Tensor cartan_hh(const PointGeometry& geo);
Tensor riemann_operator(const PointGeometry& geo);
Tensor ricci_trace_alt(const PointGeometry& geo);
double flag_curvature(const PointGeometry& geo, std::span<const double> X);

}  // namespace finsler
