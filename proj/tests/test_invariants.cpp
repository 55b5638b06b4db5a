#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/invariants.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

TEST(Invariants, CatalogMetricsSatisfyStructuralIdentities) {
    for (const auto& spec : {euclidean(2), sphere(3), hyperbolic(2), funk(2), perturbed_randers(3)}) {
        const auto results = invariant_suite(spec, sample_points(spec, 5));
        EXPECT_EQ(results.size(), 16u);
        for (const auto& r : results) EXPECT_TRUE(r.pass) << spec.name() << ": " << r.name << " = " << r.value;
    }
}

TEST(Invariants, DetectsBrokenHomogeneity) {
    // not 1-homogeneous in y
    const MetricSpec bad = custom_metric(2, "y1^2 + y2^2 + 1");
    const auto results = invariant_suite(bad, sample_points(bad, 3));
    bool saw = false;
    for (const auto& r : results) {
        if (r.name == "homogeneity_F") {
            saw = true;
            EXPECT_FALSE(r.pass);
        }
    }
    EXPECT_TRUE(saw);
}
