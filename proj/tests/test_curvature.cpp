#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/sampling.hpp"
#include "oracles.hpp"

using namespace finsler;

TEST(Curvature, SpaceFormsHaveConstantChernCurvature) {
    struct Case {
        MetricSpec spec;
        double kappa;
    };
    for (const auto& c : {Case{sphere(2), 1.0}, Case{sphere(3, 4.0), 4.0}, Case{hyperbolic(3), -1.0},
                          Case{euclidean(2), 0.0}}) {
        for (const auto& tp : sample_points(c.spec, 8)) {
            const PointGeometry geo = compute_geometry(c.spec, tp, 4);
            const Tensor want = oracle::space_form_chern(geo.g, c.kappa);
            EXPECT_LT(max_abs_diff(geo.chern, want), 1e-11 * (1 + want.max_abs())) << c.spec.name();
            EXPECT_LT(max_abs_diff(cartan_hh(geo), geo.chern), 1e-12);
            EXPECT_NEAR(geo.ricci, (c.spec.dim() - 1) * c.kappa * geo.F2, 1e-10 * (1 + geo.F2));
        }
    }
}

TEST(Curvature, FlagCurvatureOfModelSpaces) {
    UniformSource src(9);
    for (const auto& [spec, kappa] : {std::pair{sphere(3), 1.0}, std::pair{hyperbolic(2), -1.0},
                                      std::pair{funk(2), -0.25}, std::pair{funk(3), -0.25}}) {
        for (const auto& tp : sample_points(spec, 8)) {
            const auto X = sample_transverse(src, tp.y);
            EXPECT_NEAR(flag_curvature(spec, tp, X), kappa, 1e-9) << spec.name();
        }
    }
}

TEST(Curvature, FunkRiemannOperator) {
    const MetricSpec f = funk(3);
    for (const auto& tp : sample_points(f, 5)) {
        const PointGeometry geo = compute_geometry(f, tp, 4);
        const Tensor R = riemann_operator(geo);
        const auto l = unit_vector(f, tp);
        const auto ll = lower_index(geo.g, l);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
                const double want = -0.25 * geo.F2 * ((i == k) - l[static_cast<std::size_t>(i)] * ll[static_cast<std::size_t>(k)]);
                EXPECT_NEAR(R(i, k), want, 1e-10);
            }
    }
}

TEST(Curvature, RicciTensor) {
    for (const auto& [spec, kappa] : {std::pair{sphere(3), 1.0}, std::pair{funk(2), -0.25}}) {
        const TangentPoint tp = sample_points(spec, 1, 5)[0];
        const Tensor g = fundamental_tensor(spec, tp);
        const Tensor want = g * ((spec.dim() - 1) * kappa);
        EXPECT_LT(max_abs_diff(ricci_tensor(spec, tp), want), 1e-5);
        EngineOptions five;
        five.max_order = 5;
        EXPECT_LT(max_abs_diff(ricci_tensor(spec, tp, five), want), 1e-7);
    }
    EngineOptions strict;
    strict.fd_fallback = false;
    EXPECT_THROW(ricci_tensor(sphere(2), TangentPoint{{0, 0}, {1, 0}}, strict), OrderOverflow);
}

TEST(Curvature, DegenerateFlagsRejected) {
    const TangentPoint tp{{0.1, 0.1}, {1.0, 2.0}};
    const std::vector<double> parallel{2.0, 4.0};
    EXPECT_THROW(flag_curvature(sphere(2), tp, parallel), DegenerateFlag);
    const std::vector<double> wrong{1.0};
    EXPECT_THROW(flag_curvature(sphere(2), tp, wrong), InvalidParameter);
}

TEST(Curvature, PerturbedRandersIsNotFlat) {
    const MetricSpec p = perturbed_randers(2);
    const TangentPoint tp{{0.1, 0.2}, {1.0, 0.3}};
    const CurvatureData d = curvature_data(p, tp, true);
    EXPECT_GT(d.riemann.max_abs(), 1e-4);
    ASSERT_TRUE(d.ricci_tensor.has_value());
    EXPECT_LT(d.ricci_tensor->symmetry_defect(0, 1), 1e-12);
}
