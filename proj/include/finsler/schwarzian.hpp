#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "finsler/connection.hpp"
#include "finsler/geometry.hpp"

namespace finsler {

/// Derived quantities of a conformal factor φ at one TangentPoint.
struct ConformalFactor {
    std::vector<double> phi_i;    // ∂φ/∂x^i
    std::vector<double> phi_up;   // g^ij φ_j
    double grad_norm2 = 0.0;      // φ^i φ_i
    double laplacian = 0.0;       // Δφ
    double Phi = 0.0;             // (Δφ - ‖grad φ‖²)/n
    std::vector<double> Phi_k;    // δΦ/δx^k (empty unless requested)
};

ConformalFactor conformal_factor(const MetricSpec& spec, const ScalarField& phi, const TangentPoint& tp,
                                 bool with_derivative = false, const EngineOptions& options = {});

/// B_ij = ∇_iφ_j - φ_iφ_j - Φ g_ij.
Tensor schwarzian_tensor(const MetricSpec& spec, const ScalarField& phi, const TangentPoint& tp,
                         const EngineOptions& options = {});
Tensor schwarzian_tensor(const PointGeometry& geo, const ScalarField& phi);

/// Z^h_ijk = R^h_ijk - (g_ij R^h_k - g_ik R^h_j)/(n-1), R^h_k = g^ij R^h_ijk.
Tensor z_tensor(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
Tensor z_tensor(const PointGeometry& geo);

/// Z^h_jk = R^h_jk - (y_j R^h_k - y_k R^h_j)/F², R^h_k the Riemann operator.
Tensor z_scalar_tensor(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options = {});
Tensor z_scalar_tensor(const PointGeometry& geo);

inline constexpr double kDefaultIntegrabilityTol = 1e-4;

struct IntegrabilityReport {
    std::string metric;
    int n_samples = 0;
    double sup_Z = 0.0;
    double sup_Zscalar = 0.0;
    std::optional<double> sup_B;
    double tol = kDefaultIntegrabilityTol;
    /// Largest |T| / (1 + local curvature scale) behind each verdict.
    double scaled_Z = 0.0;
    double scaled_Zscalar = 0.0;
    std::optional<double> scaled_B;
    std::map<std::string, bool> verdicts;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

IntegrabilityReport integrability_report(const MetricSpec& spec, const std::vector<TangentPoint>& sample,
                                         const std::optional<ScalarField>& phi = std::nullopt,
                                         double tol = kDefaultIntegrabilityTol,
                                         const EngineOptions& options = {});

/// C^h_ij φ_h.
Tensor c_conformal_residual(const MetricSpec& spec, const ScalarField& phi, const TangentPoint& tp,
                            const EngineOptions& options = {});

/// F̄ = e^φ F, kept in Riemannian or Randers form when the input is.
MetricSpec conformal_change(const MetricSpec& spec, const ScalarField& phi);

/// ∇_i∇_j ρ + c² ρ g_ij.
Tensor concircular_residual(const MetricSpec& spec, const ScalarField& rho, double c, const TangentPoint& tp,
                            const EngineOptions& options = {});

/// sup over the sample of max |B_ij(φ)|.
double mobius_residual(const MetricSpec& spec, const ScalarField& phi, const std::vector<TangentPoint>& sample,
                       const EngineOptions& options = {});

/// S(g) = g'''/g' - 3/2 (g''/g')². Throws DomainError at critical points (|g'| < 1e-12).
double schwarzian_1d(const Function& g, double x);

}  // namespace finsler
