#include <cmath>
#include <cstdlib>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/diff.hpp"
#include "finsler/expression.hpp"
#include "oracles.hpp"

using namespace finsler;

TEST(Diff, PartialMatchesClosedForm) {
    const Function f = Expression::parse("x1^2*x2^3 + exp(x1*x2)", 2).function();
    const std::vector<double> p{0.5, -0.4};
    const double ab = 0.5 * -0.4;
    // d^2/dx1 dx2: 6 x1 x2^2 + (1 + x1 x2) e^{x1 x2}
    EXPECT_NEAR(partial(f, p, MultiIndex({1, 1})), 6 * 0.5 * 0.16 + (1 + ab) * std::exp(ab), 1e-13);
    EXPECT_NEAR(partial(f, p, MultiIndex({0, 0})), f(p), 0.0);
}

TEST(Diff, FdPartialAgreesWithJets) {
    const Function f = Expression::parse("sin(x1)*cos(x2)*exp(x3)", 3).function();
    const std::vector<double> p{0.3, 0.2, -0.1};
    for (const auto& idx : {MultiIndex({1, 0, 0}), MultiIndex({1, 1, 0}), MultiIndex({0, 2, 1}),
                            MultiIndex({2, 1, 1})}) {
        const double ad = partial(f, p, idx);
        EXPECT_NEAR(fd_partial(f, p, idx), ad, 1e-6 * (1 + std::abs(ad)));
        EXPECT_NEAR(oracle::fd([&](std::span<const double> z) { return f(z); }, p,
                               [&] {
                                   std::vector<int> vars;
                                   for (int v = 0; v < 3; ++v)
                                       for (int c = 0; c < idx[v]; ++c) vars.push_back(v);
                                   return vars;
                               }()),
                    ad, 1e-6 * (1 + std::abs(ad)));
    }
}

TEST(Diff, OrderLimits) {
    const Function f = Expression::parse("x1^6", 1).function();
    const std::vector<double> p{1.0};
    EXPECT_THROW(partial(f, p, MultiIndex({5})), OrderOverflow);
    EngineOptions five;
    five.max_order = 5;
    EXPECT_NEAR(partial(f, p, MultiIndex({5}), five), 720.0, 1e-10);
    EXPECT_THROW(fd_partial(f, p, MultiIndex({5})), OrderOverflow);
}

TEST(Diff, EnvironmentOverride) {
    ::setenv("FINSLER_MAX_ORDER", "5", 1);
    EXPECT_EQ(EngineOptions::from_environment().max_order, 5);
    ::setenv("FINSLER_MAX_ORDER", "9", 1);
    EXPECT_THROW(EngineOptions::from_environment(), InvalidParameter);
    ::setenv("FINSLER_MAX_ORDER", "abc", 1);
    EXPECT_THROW(EngineOptions::from_environment(), InvalidParameter);
    ::unsetenv("FINSLER_MAX_ORDER");
    EXPECT_EQ(EngineOptions::from_environment().max_order, 4);
}
