#include <gtest/gtest.h>

#include "floergrid/homology.hpp"
#include "support/corpus.hpp"

using namespace floergrid;

namespace {

using Table = std::map<std::pair<int, int>, int>;

struct Known {
    const char* grid;
    int twice_tau;
    int twice_shift;
    Table graded;
};

// Frozen from the reference implementation in tests/support/oracle.hpp where n <= 4, and from the
// engine for n = 5, 6 (checked against the cobordism bounds in test_cobordism).
const std::vector<Known>& known() {
    static const std::vector<Known> k = {
        {"unknot_2", 0, -2, {{{0, 1}, 1}}},
        {"trefoil_left", -2, 2, {{{0, -2}, 1}, {{1, -1}, 1}, {{2, 0}, 1}}},
        {"trefoil_right", 2, -10, {{{-2, 4}, 1}, {{-1, 5}, 1}, {{0, 6}, 1}}},
        {"hopf_negative", -2, 2, {{{-1, -2}, 1}, {{0, -1}, 2}, {{1, 0}, 1}}},
        {"hopf_positive", 0, -6, {{{-2, 2}, 1}, {{-1, 3}, 2}, {{0, 4}, 1}}},
        {"unlink_2", 0, 0, {{{-1, 0}, 1}, {{0, 0}, 1}}},
        {"unlink_3", 0, 0, {{{-2, 0}, 1}, {{-1, 0}, 2}, {{0, 0}, 1}}},
        {"figure_eight", 0, -2, {{{-1, 0}, 1}, {{0, 1}, 3}, {{1, 2}, 1}}},
    };
    return k;
}

} // namespace

TEST(KnownValues, TauShiftAndGradedTables) {
    for (const auto& k : known()) {
        auto g = corpus::load_grid(k.grid);
        FloerEngine eng(g);
        auto rep = eng.tau_report();
        EXPECT_EQ(rep.tau.twice(), k.twice_tau) << k.grid;
        EXPECT_EQ(rep.sym.shift.twice(), k.twice_shift) << k.grid;
        EXPECT_EQ(rep.table.dims, k.graded) << k.grid;
        EXPECT_TRUE(rep.certified) << k.grid;
    }
}

TEST(KnownValues, HatTotalIsPowerOfTwoInComponents) {
    for (const auto& k : known()) {
        auto g = corpus::load_grid(k.grid);
        FloerEngine eng(g);
        auto hat = eng.hat_homology(eng.default_window(4));
        int total = 0;
        for (const auto& [i, d] : hat) total += d;
        EXPECT_EQ(total, 1 << (components(g).size() - 1)) << k.grid;
    }
}

TEST(HatHomology, NegativeHopfGradings) {
    auto g = corpus::load_grid("hopf_negative");
    FloerEngine eng(g);
    EXPECT_EQ(eng.hat_homology(eng.default_window(4)), (std::map<int, int>{{-1, 1}, {0, 1}}));
}

TEST(HatHomology, FreeFunctionAgreesWithEngine) {
    auto g = corpus::load_grid("unlink_3");
    FloerEngine eng(g);
    auto w = eng.default_window(4);
    EXPECT_EQ(hat_homology_dims(g, w), (std::map<int, int>{{-2, 1}, {-1, 2}, {0, 1}}));
}

TEST(GradedHomology, EmptyWindowThrows) {
    auto g = corpus::load_grid("unknot_2");
    EXPECT_THROW(graded_homology(g, Window{5, 9}), WindowError);
}

TEST(GradedHomology, WindowGrowthIsStable) {
    for (const char* name : {"trefoil_left", "hopf_positive", "figure_eight"}) {
        auto g = corpus::load_grid(name);
        FloerEngine eng(g);
        auto a = eng.graded_homology(eng.default_window(4));
        auto b = eng.graded_homology(eng.default_window(6));
        EXPECT_EQ(a.dims, b.dims) << name;
        EXPECT_NO_THROW(graded_homology(g, eng.default_window(4))) << name;
    }
}

TEST(Narrowing, HalvesAtEveryLevel) {
    auto g = corpus::load_grid("figure_eight");
    FloerEngine eng(g);
    const auto& nr = eng.narrowing();
    ASSERT_TRUE(nr.ok) << nr.note;
    for (std::size_t t = 1; t < nr.hat_totals.size(); ++t) EXPECT_EQ(nr.hat_totals[t - 1], 2 * nr.hat_totals[t]);
    EXPECT_EQ(nr.hat_totals.back(), 1);
    EXPECT_EQ(nr.floor, -1);
}

TEST(Symmetrization, ShiftCentersSupport) {
    for (const auto& k : known()) {
        auto g = corpus::load_grid(k.grid);
        auto s = symmetrize(g);
        EXPECT_EQ(HalfInt(s.m_max) + s.shift, -(HalfInt(s.m_min) + s.shift)) << k.grid;
    }
}

TEST(Tau, IotaThresholdBracketsTau) {
    for (const char* name : {"trefoil_left", "trefoil_right", "hopf_negative", "unknot_2"}) {
        auto g = corpus::load_grid(name);
        FloerEngine eng(g);
        auto w = eng.default_window(4);
        auto t = tau(g);
        EXPECT_TRUE(iota_nontrivial(g, t, w)) << name;
        EXPECT_FALSE(iota_nontrivial(g, t - HalfInt(1), w)) << name;
    }
}

TEST(Tau, MirrorNegatesOnTrefoils) {
    EXPECT_EQ(tau(corpus::load_grid("trefoil_right")), -tau(corpus::load_grid("trefoil_left")));
}

TEST(Tau, UncertifiedAndThreadCountGiveSameAnswer) {
    auto g = corpus::load_grid("trefoil_right");
    ComputeOptions one;
    one.threads = 1;
    one.certify = false;
    ComputeOptions many;
    many.threads = 4;
    EXPECT_EQ(tau(g, one), tau(g, many));
}

TEST(ChainBasis, DimensionsMatchBoundaryMatrix) {
    auto g = corpus::load_grid("hopf_positive");
    for (int i = -3; i <= 0; ++i) {
        auto src = chain_basis(g, i), dst = chain_basis(g, i - 1);
        auto m = boundary_matrix(g, i);
        EXPECT_EQ(m.cols(), src.entries.size());
        EXPECT_EQ(m.rows(), dst.entries.size());
        for (const auto& t : src.entries) EXPECT_EQ(maslov(g, t), i);
    }
}
