#pragma once

#include <string>
#include <vector>

#include "finsler/diff.hpp"
#include "finsler/metric.hpp"

namespace finsler {

inline constexpr double kInvariantTol = 1e-6;

struct InvariantResult {
    std::string name;
    double value = 0.0;  // sup over the sample of the scaled defect
    double tol = kInvariantTol;
    bool pass = false;
};

/// Structural identities each checked as sup |defect| / (1 + |reference|):
///   homogeneity_F, homogeneity_g, euler_F2, positive_definite, cartan_y,
///   spray_euler, nonlinear_euler, delta_F, metricity_h, metricity_v,
///   chern_antisymmetry, chern_spray, riemann_y, cartan_hh_y, trace_Z,
///   zscalar_antisymmetry.
std::vector<InvariantResult> invariant_suite(const MetricSpec& spec, const std::vector<TangentPoint>& sample,
                                             double tol = kInvariantTol, const EngineOptions& options = {});

}  // namespace finsler
