#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/expression.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

namespace {

ScalarField field(const std::string& text, int n) { return Expression::parse(text, n).function(); }

}  // namespace

TEST(Connection, MetricCompatibility) {
    for (const auto& spec : {sphere(2), funk(2), perturbed_randers(3)}) {
        const TensorField g = [&spec](const TangentPoint& q) { return fundamental_tensor(spec, q); };
        for (const auto& tp : sample_points(spec, 5)) {
            const Tensor hg = h_covariant(spec, g, tp);
            const Tensor vg = v_covariant(spec, g, tp);
            EXPECT_EQ(hg.rank(), 3);
            EXPECT_LT(hg.max_abs(), 1e-8) << spec.name();
            EXPECT_LT(vg.max_abs(), 1e-8) << spec.name();
            for (int k = 0; k < spec.dim(); ++k) EXPECT_NEAR(delta_x(spec, spec.norm(), tp, k), 0.0, 1e-12);
        }
    }
}

TEST(Connection, HorizontalDerivativeOfCoordinateFunction) {
    // ∇ of the covector dx^1 on the sphere is -Γ^1_ij
    const MetricSpec s = sphere(2);
    const TangentPoint tp{{0.2, -0.1}, {0.3, 1.0}};
    const TensorField dx1 = [](const TangentPoint&) {
        Tensor t = Tensor::covector(2);
        t(0) = 1.0;
        return t;
    };
    const Tensor D = h_covariant(s, dx1, tp);
    const auto cd = cartan_coefficients(s, tp);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(D(i, k), -cd.christoffel(0, i, k), 1e-12);
}

TEST(Connection, FlatHessianAndLaplacian) {
    const MetricSpec e = euclidean(3);
    const TangentPoint tp{{0.1, 0.2, 0.3}, {1.0, 0.0, 0.0}};
    EXPECT_LT(hessian(e, field("2*x1 - x3 + 1", 3), tp).max_abs(), 1e-15);
    EXPECT_NEAR(laplacian(e, field("x1^2 + x2^2 + x3^2", 3), tp), 6.0, 1e-13);
    const VectorField radial{field("x1", 3), field("x2", 3), field("x3", 3)};
    EXPECT_NEAR(div_h(e, radial, tp), 3.0, 1e-12);
    EXPECT_NEAR(div_v(e, radial, tp), 0.0, 1e-12);
}

TEST(Connection, SphereHessianOfConcircularFunction) {
    // ρ = (1 - |x|^2)/(1 + |x|^2) satisfies Hess ρ = -ρ g on the unit sphere
    const MetricSpec s = sphere(2);
    const ScalarField rho = field("(1 - x1^2 - x2^2)/(1 + x1^2 + x2^2)", 2);
    for (const auto& tp : sample_points(s, 5)) {
        const Tensor H = hessian(s, rho, tp);
        const Tensor g = fundamental_tensor(s, tp);
        const double r = rho(tp.x);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) EXPECT_NEAR(H(i, j), -r * g(i, j), 1e-12);
    }
}

TEST(Connection, GradientIsLegendreDual) {
    const ScalarField h = field("x1 + 0.5*x2^2", 2);
    const std::vector<double> x{0.1, 0.4};
    const std::vector<double> dh{1.0, 0.4};

    const MetricSpec s = sphere(2);
    const auto gs = gradient(s, h, x);
    const Tensor ginv = inverse_metric(s, TangentPoint{x, {1, 0}});
    EXPECT_NEAR(gs[0], ginv(0, 0) * dh[0], 1e-14);
    EXPECT_NEAR(gs[1], ginv(1, 1) * dh[1], 1e-14);

    for (const auto& spec : {funk(2), perturbed_randers(2)}) {
        const auto v = gradient(spec, h, x);
        const auto lowered = lower_index(fundamental_tensor(spec, TangentPoint{x, v}), v);
        EXPECT_NEAR(lowered[0], dh[0], 1e-10) << spec.name();
        EXPECT_NEAR(lowered[1], dh[1], 1e-10) << spec.name();
    }
    const auto zero = gradient(funk(2), field("3", 2), x);
    EXPECT_EQ(zero, std::vector<double>(2, 0.0));

    GradientOptions tight;
    tight.max_iterations = 1;
    EXPECT_THROW(gradient(funk(2), h, x, tight), NonConvergence);
}
