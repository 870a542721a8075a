#include <gtest/gtest.h>

#include <random>

#include "floergrid/f2.hpp"

using namespace floergrid;

namespace {

BitVec vec(std::initializer_list<int> bits, std::size_t n) {
    BitVec v(n);
    for (int b : bits) v.set(b);
    return v;
}

BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937& rng) {
    BitMatrix m(rows, cols);
    std::bernoulli_distribution coin(0.3);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (coin(rng)) m.set(i, j);
    return m;
}

} // namespace

TEST(BitVec, SetFlipAndScanAcrossWordBoundary) {
    BitVec v(130);
    v.set(3);
    v.set(64);
    v.set(129);
    EXPECT_EQ(v.count(), 3u);
    EXPECT_EQ(v.find_first(), 3u);
    EXPECT_EQ(v.find_next(4), 64u);
    EXPECT_EQ(v.find_next(65), 129u);
    v.flip(64);
    EXPECT_EQ(v.find_next(4), 129u);
    v.reset(3);
    v.reset(129);
    EXPECT_FALSE(v.any());
    EXPECT_EQ(v.find_first(), BitVec::npos);
}

TEST(BitVec, XorAndDot) {
    auto a = vec({0, 2, 70}, 80), b = vec({2, 5, 70}, 80);
    auto c = a ^ b;
    EXPECT_EQ(c.count(), 2u);
    EXPECT_TRUE(c.test(0));
    EXPECT_TRUE(c.test(5));
    EXPECT_FALSE(a.dot(b));  // two common bits
    EXPECT_TRUE(a.dot(vec({0}, 80)));
}

TEST(BitMatrix, RankOfSmallExamples) {
    EXPECT_EQ(rank(BitMatrix{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}), 2u);
    EXPECT_EQ(rank(BitMatrix::identity(5)), 5u);
    EXPECT_EQ(rank(BitMatrix(3, 4)), 0u);
}

TEST(BitMatrix, TransposeAndApply) {
    BitMatrix m{{1, 0, 1}, {0, 1, 1}};
    auto t = m.transpose();
    ASSERT_EQ(t.rows(), 3u);
    EXPECT_TRUE(t.get(2, 0));
    EXPECT_TRUE(t.get(2, 1));
    auto y = m.apply(vec({0, 2}, 3));
    EXPECT_FALSE(y.test(0));
    EXPECT_TRUE(y.test(1));
}

TEST(Subspace, KernelHasComplementaryDimensionAndIsAnnihilated) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        auto m = random_matrix(7 + trial % 5, 9 + trial % 7, rng);
        auto k = kernel_basis(m);
        EXPECT_EQ(k.dim() + rank(m), m.cols());
        for (const auto& v : k.basis()) EXPECT_FALSE(m.apply(v).any());
    }
}

TEST(Subspace, ContainsAndRelativeRank) {
    auto s = Subspace::span(4, {vec({0, 1}, 4), vec({1, 2}, 4)});
    EXPECT_EQ(s.dim(), 2u);
    EXPECT_TRUE(s.contains(vec({0, 2}, 4)));
    EXPECT_FALSE(s.contains(vec({3}, 4)));
    auto z = Subspace::span(4, {vec({0, 2}, 4), vec({3}, 4)});
    EXPECT_EQ(relative_rank(z, s), 1u);
    EXPECT_THROW(relative_rank(z, Subspace(5)), DimensionMismatch);
    EXPECT_THROW(s.contains(BitVec(3)), DimensionMismatch);
}

TEST(Echelon, InsertRejectsDependentVectors) {
    Echelon e(6);
    EXPECT_TRUE(e.insert(vec({1, 4}, 6)));
    EXPECT_TRUE(e.insert(vec({4, 5}, 6)));
    EXPECT_FALSE(e.insert(vec({1, 5}, 6)));
    EXPECT_EQ(e.dim(), 2u);
    EXPECT_TRUE(e.contains(vec({1, 5}, 6)));
}

TEST(TrackedEchelon, KernelCombinationsMapToZero) {
    BitMatrix m{{1, 1, 0, 1}, {0, 1, 1, 1}};
    auto t = m.transpose();
    TrackedEchelon e(m.rows(), m.cols());
    int kernels = 0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (auto z = e.feed(j, t.row(j))) {
            ++kernels;
            EXPECT_TRUE(z->test(j));
            EXPECT_FALSE(m.apply(*z).any());
        }
    EXPECT_EQ(kernels, 2);
}
