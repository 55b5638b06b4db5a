#pragma once

#include <vector>

#include "finsler/diff.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Everything the Taylor pipeline yields at one TangentPoint from a seed of
/// the given depth. Depth 2 gives g and the spray, depth 3 the connection
/// coefficients, depth 4 the hh-curvatures, depth 5 the y-gradient of Ric.
/// Fields beyond the computed depth are left empty.
struct PointGeometry {
    TangentPoint tp;
    int n = 0;
    int depth = 0;

    double F = 0.0;
    double F2 = 0.0;
    Tensor g;            // g_ij
    Tensor ginv;         // g^ij
    Tensor spray;        // G^i
    Tensor nonlinear;    // G^i_j
    Tensor christoffel;  // Γ^i_jk
    Tensor formal;       // γ^i_jk
    Tensor cartan_low;   // C_ijk
    Tensor cartan;       // C^i_jk
    Tensor chern;        // R^i_jkm
    Tensor spray_curv;   // R^i_km
    double ricci = 0.0;  // R^s_s
    std::vector<double> ricci_grad_y;  // ∂Ric/∂y^i

    bool has_connection() const noexcept { return depth >= 3; }
    bool has_curvature() const noexcept { return depth >= 4; }
};

/// Run the pipeline. Throws OrderOverflow if depth exceeds options.max_order
/// or the hard jet limit, DomainError / NotPositiveDefinite on bad points.
PointGeometry compute_geometry(const MetricSpec& spec, const TangentPoint& tp, int depth,
                               const EngineOptions& options = {});

/// Inverse of a square matrix of jets (row-major), Gauss-Jordan with
/// pivoting on the base value. Throws SingularMatrix.
std::vector<Jet> invert_jets(std::vector<Jet> m, int n);

}  // namespace finsler
