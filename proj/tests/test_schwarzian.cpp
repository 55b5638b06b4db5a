#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/expression.hpp"
#include "finsler/sampling.hpp"
#include "finsler/schwarzian.hpp"

using namespace finsler;

namespace {

ScalarField field(const std::string& text, int n) { return Expression::parse(text, n).function(); }

double g_trace(const Tensor& ginv, const Tensor& B) {
    double s = 0.0;
    for (int i = 0; i < B.dim(); ++i)
        for (int j = 0; j < B.dim(); ++j) s += ginv(i, j) * B(i, j);
    return s;
}

}  // namespace

TEST(Schwarzian, SymmetricAndTraceless) {
    const ScalarField phi = field("0.3*x1*x2 + sin(x1) - x2^2", 2);
    for (const auto& spec : {sphere(2), funk(2), perturbed_randers(2)}) {
        for (const auto& tp : sample_points(spec, 5)) {
            const PointGeometry geo = compute_geometry(spec, tp, 3);
            const Tensor B = schwarzian_tensor(geo, phi);
            EXPECT_LT(B.symmetry_defect(0, 1), 1e-12) << spec.name();
            EXPECT_NEAR(g_trace(geo.ginv, B), 0.0, 1e-12) << spec.name();
        }
    }
}

TEST(Schwarzian, HomothetiesAndStereographicFactor) {
    const MetricSpec e = euclidean(3);
    const auto sample = sample_points(e, 10);
    EXPECT_EQ(mobius_residual(e, field("2.5", 3), sample), 0.0);
    EXPECT_LT(mobius_residual(e, field("log(2/(1 + x1^2 + x2^2 + x3^2))", 3), sample), 1e-12);
    EXPECT_GT(mobius_residual(e, field("x1^3", 3), sample), 0.1);
}

TEST(Schwarzian, ConformalFactorPieces) {
    const MetricSpec e = euclidean(2);
    const TangentPoint tp{{0.5, -0.5}, {1.0, 0.0}};
    const ConformalFactor cf = conformal_factor(e, field("x1^2 + 3*x2", 2), tp, true);
    EXPECT_NEAR(cf.phi_i[0], 1.0, 1e-15);
    EXPECT_NEAR(cf.phi_i[1], 3.0, 1e-15);
    EXPECT_NEAR(cf.grad_norm2, 10.0, 1e-14);
    EXPECT_NEAR(cf.laplacian, 2.0, 1e-14);
    EXPECT_NEAR(cf.Phi, (2.0 - 10.0) / 2.0, 1e-14);
    // Φ = (2 - 4x1^2 - 9)/2, dΦ/dx1 = -4 x1
    EXPECT_NEAR(cf.Phi_k[0], -2.0, 1e-8);
    EXPECT_NEAR(cf.Phi_k[1], 0.0, 1e-8);
}

TEST(Schwarzian, ConformalChangeOfFlatGivesSphere) {
    const MetricSpec s = conformal_change(euclidean(2), field("log(2/(1 + x1^2 + x2^2))", 2));
    EXPECT_EQ(s.name(), "euclidean+conformal");
    EXPECT_TRUE(s.is_riemannian());
    const TangentPoint tp{{0.2, 0.3}, {1.0, 0.0}};
    EXPECT_NEAR(flag_curvature(s, tp, std::vector<double>{0.0, 1.0}), 1.0, 1e-12);
    const MetricSpec r = conformal_change(funk(2), field("0.1*x1", 2));
    EXPECT_EQ(r.kind(), MetricKind::randers);
    const TangentPoint q{{0.2, 0.1}, {0.3, 0.7}};
    EXPECT_NEAR(eval_F(r, q), std::exp(0.02) * eval_F(funk(2), q), 1e-14);
    const MetricSpec c = conformal_change(custom_metric(2, "sqrt(y1^2 + 2*y2^2)"), field("x2", 2));
    EXPECT_NEAR(eval_F(c, q), std::exp(0.1) * std::sqrt(0.09 + 0.98), 1e-14);
}

TEST(Schwarzian, CConformalResidual) {
    const TangentPoint tp{{0.1, 0.2}, {1.0, 0.4}};
    EXPECT_LT(c_conformal_residual(sphere(2), field("x1*x2", 2), tp).max_abs(), 1e-15);
    EXPECT_GT(c_conformal_residual(funk(2), field("x1", 2), tp).max_abs(), 1e-3);
}

TEST(Schwarzian, ZTensorsOnModelSpaces) {
    for (const auto& spec : {sphere(3), hyperbolic(3)}) {
        const auto rep = integrability_report(spec, sample_points(spec, 10));
        EXPECT_TRUE(rep.all_pass()) << spec.name();
        EXPECT_LT(rep.sup_Z, 1e-10);
        EXPECT_FALSE(rep.to_json()["sup_B"].is_number());
    }
    const auto fp = integrability_report(perturbed_randers(3), sample_points(perturbed_randers(3), 10), field("x1", 3));
    EXPECT_FALSE(fp.verdicts.at("Z"));
    EXPECT_TRUE(fp.sup_B.has_value());
    const auto fz = integrability_report(funk(3), sample_points(funk(3), 10));
    EXPECT_TRUE(fz.verdicts.at("Zscalar"));
    EXPECT_THROW(integrability_report(sphere(2), {}), InvalidParameter);
}

TEST(Schwarzian, OneDimensional) {
    EXPECT_NEAR(schwarzian_1d(field("(2*x1 + 1)/(x1 + 3)", 1), 0.4), 0.0, 1e-13);
    EXPECT_NEAR(schwarzian_1d(field("tan(3*x1)", 1), 0.2), 18.0, 1e-11);
    EXPECT_NEAR(schwarzian_1d(field("exp(x1)", 1), 0.7), -0.5, 1e-14);
    EXPECT_THROW(schwarzian_1d(field("x1^2", 1), 0.0), DomainError);
}

TEST(Schwarzian, Concircular) {
    const ScalarField rho = field("(1 - x1^2 - x2^2)/(1 + x1^2 + x2^2)", 2);
    const TangentPoint tp{{0.3, -0.2}, {0.5, 1.0}};
    EXPECT_LT(concircular_residual(sphere(2), rho, 1.0, tp).max_abs(), 1e-12);
    EXPECT_GT(concircular_residual(sphere(2), rho, 2.0, tp).max_abs(), 0.1);
}
