#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/expression.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

TEST(Metric, EuclideanBasics) {
    const MetricSpec e = euclidean(2);
    const TangentPoint tp{{0.1, -0.2}, {3.0, 4.0}};
    EXPECT_DOUBLE_EQ(eval_F(e, tp), 5.0);
    const Tensor g = fundamental_tensor(e, tp);
    EXPECT_NEAR(max_abs_diff(g, Tensor::identity(2)), 0.0, 1e-15);
    EXPECT_NEAR(max_abs_diff(inverse_metric(e, tp), Tensor::identity(2)), 0.0, 1e-15);
    const auto l = unit_vector(e, tp);
    EXPECT_NEAR(l[0], 0.6, 1e-15);
    EXPECT_NEAR(l[1], 0.8, 1e-15);
    const TangentPoint u = normalized(e, tp);
    EXPECT_NEAR(eval_F(e, u), 1.0, 1e-15);
}

TEST(Metric, HomogeneityOnSamples) {
    for (const auto& spec : {sphere(3), hyperbolic(2), funk(2), perturbed_randers(3)}) {
        for (const auto& tp : sample_points(spec, 20, 7)) {
            const double F = eval_F(spec, tp);
            EXPECT_GT(F, 0.0);
            for (double lambda : {0.25, 3.0}) {
                TangentPoint q = tp;
                for (double& v : q.y) v *= lambda;
                EXPECT_NEAR(eval_F(spec, q), lambda * F, 1e-13 * lambda * F) << spec.name();
            }
        }
    }
}

TEST(Metric, EulerIdentity) {
    const MetricSpec spec = funk(3);
    for (const auto& tp : sample_points(spec, 10)) {
        const Tensor g = fundamental_tensor(spec, tp);
        const double F = eval_F(spec, tp);
        EXPECT_NEAR(inner(g, tp.y, tp.y), F * F, 1e-12 * F * F);
    }
}

TEST(Metric, RandersAdmissibility) {
    EXPECT_NO_THROW(randers_constant({1, 0, 0, 1}, {0.5, 0.0}));
    EXPECT_THROW(randers_constant({1, 0, 0, 1}, {1.0, 0.0}), InvalidParameter);
    EXPECT_THROW(randers_constant({1, 0.2, 0, 1}, {0.1, 0.0}), InvalidParameter);
    EXPECT_THROW(randers_constant({-1, 0, 0, 1}, {0.1, 0.0}), InvalidParameter);
    const MetricSpec f = funk(2);
    const std::vector<double> x{0.5, 0.0};
    EXPECT_NEAR(f.randers_b_norm(x), 0.5, 1e-14);
}

TEST(Metric, DomainChecks) {
    const MetricSpec h = hyperbolic(2);
    EXPECT_TRUE(h.contains(std::vector<double>{0.5, 0.5}));
    EXPECT_FALSE(h.contains(std::vector<double>{0.8, 0.7}));
    EXPECT_THROW(eval_F(h, TangentPoint{{0.9, 0.9}, {1, 0}}), DomainError);
    EXPECT_THROW(eval_F(h, TangentPoint{{0.1, 0.1}, {0, 0}}), DomainError);
    EXPECT_THROW(eval_F(h, TangentPoint{{0.1}, {1}}), InvalidParameter);
    const MetricSpec small = h.restricted(0.5);
    EXPECT_FALSE(small.contains(std::vector<double>{0.4, 0.4}));
    EXPECT_THROW(h.restricted(2.0), InvalidParameter);
    EXPECT_EQ(sphere(2).renamed("s2").name(), "s2");
}

TEST(Metric, NonConvexCustomRejected) {
    // |y1| + |y2|-like: y1^4 + y2^4 is degenerate on the axes
    const MetricSpec m = custom_metric(2, "sqrt(sqrt(y1^4 + y2^4))");
    EXPECT_THROW(fundamental_tensor(m, TangentPoint{{0, 0}, {1, 0}}), NotPositiveDefinite);
}

TEST(Metric, InvertMatrix) {
    Tensor m(2, {Variance::lower, Variance::lower});
    m(0, 0) = 2;
    m(0, 1) = m(1, 0) = 1;
    m(1, 1) = 3;
    const Tensor inv = invert_matrix(m, Variance::upper);
    EXPECT_NEAR(inv(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(inv(0, 1), -0.2, 1e-15);
    Tensor s(2, {Variance::lower, Variance::lower});
    EXPECT_THROW(invert_matrix(s, Variance::upper), SingularMatrix);
}
