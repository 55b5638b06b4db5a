#include <gtest/gtest.h>

#include "finsler/tensor.hpp"

using namespace finsler;

TEST(Tensor, IndexingIsRowMajor) {
    Tensor t(3, {Variance::upper, Variance::lower});
    t(1, 2) = 5.0;
    EXPECT_EQ(t.size(), 9u);
    EXPECT_DOUBLE_EQ(t.data()[5], 5.0);
    const std::vector<int> idx{1, 2};
    EXPECT_DOUBLE_EQ(t.at(idx), 5.0);
    EXPECT_EQ(t.rank(), 2);
}

TEST(Tensor, SymmetryDefects) {
    Tensor t(2, {Variance::lower, Variance::lower, Variance::lower});
    t(0, 1, 0) = 1.0;
    t(1, 0, 0) = 1.0;
    EXPECT_DOUBLE_EQ(t.symmetry_defect(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(t.symmetry_defect(1, 2), 1.0);
    Tensor a(2, {Variance::lower, Variance::lower});
    a(0, 1) = 2.0;
    a(1, 0) = -2.0;
    EXPECT_DOUBLE_EQ(a.antisymmetry_defect(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(a.symmetry_defect(0, 1), 4.0);
}

TEST(Tensor, Arithmetic) {
    const Tensor I = Tensor::identity(3);
    const Tensor J = 2.0 * I - I;
    EXPECT_DOUBLE_EQ(max_abs_diff(I, J), 0.0);
    EXPECT_DOUBLE_EQ((I * 3.0).max_abs(), 3.0);
    Tensor other(2, {Variance::upper, Variance::lower});
    EXPECT_THROW(Tensor(I) += other, InvalidParameter);
}
