#include <gtest/gtest.h>

#include <cstdlib>

#include "floergrid/complex.hpp"
#include "support/corpus.hpp"
#include "support/oracle.hpp"

using namespace floergrid;

TEST(Gradings, TwoByTwoUnknotGenerators) {
    auto g = corpus::load_grid("unknot_2");
    EXPECT_EQ(maslov(g, Perm{1, 2}), 0);
    EXPECT_EQ(alexander(g, Perm{1, 2}), 1);
    EXPECT_EQ(maslov(g, Perm{2, 1}), -1);
    EXPECT_EQ(alexander(g, Perm{2, 1}), 0);
}

TEST(Gradings, AgreeWithCountingFormulaOnCorpus) {
    for (const auto& e : corpus::build(5)) {
        oracle::Diagram d(e.grid);
        for (const auto& p : all_perms(e.grid.size())) {
            oracle::State s(p.size());
            for (std::size_t r = 0; r < p.size(); ++r) s[r] = p[r] - 1;
            ASSERT_EQ(maslov(e.grid, p), oracle::maslov(d, s)) << e.name;
            ASSERT_EQ(alexander(e.grid, p), oracle::alexander(d, s)) << e.name;
        }
    }
}

TEST(Gradings, RelativeAlexanderMatchesDifference) {
    for (const auto& e : corpus::build(4)) {
        auto perms = all_perms(e.grid.size());
        for (std::size_t i = 0; i < perms.size(); i += 3)
            for (std::size_t j = 0; j < perms.size(); j += 5)
                ASSERT_EQ(alexander_relative(e.grid, perms[i], perms[j]),
                          alexander(e.grid, perms[i]) - alexander(e.grid, perms[j]))
                    << e.name;
    }
}

TEST(JPairing, IsSymmetricAndBilinear) {
    auto g = corpus::load_grid("figure_eight");
    auto os = o_points(g), xs = x_points(g);
    auto x = lattice_points(Perm{3, 1, 2, 6, 4, 5});
    EXPECT_EQ(j_twice(os, xs), j_twice(xs, os));
    EXPECT_EQ(j_twice(x, join(os, xs)), j_twice(x, os) + j_twice(x, xs));
    EXPECT_EQ(j_twice(x, negate(os)), -j_twice(x, os));
}

TEST(Generators, EnumerationIsCompleteAndRanked) {
    auto perms = all_perms(5);
    EXPECT_EQ(perms.size(), 120u);
    for (std::size_t k = 0; k < perms.size(); ++k) EXPECT_EQ(perm_rank(perms[k]), k);
    EXPECT_EQ(generators(corpus::load_grid("hopf_positive")).size(), 24u);
}

TEST(Generators, SizeCapRespectsEnvironment) {
    auto g = corpus::load_grid("trefoil_right");
    ::setenv("FLOERGRID_MAX_N", "4", 1);
    EXPECT_THROW(generators(g), SizeCapExceeded);
    EXPECT_NO_THROW(generators(g, true));
    ::unsetenv("FLOERGRID_MAX_N");
    EXPECT_EQ(size_cap(), 8);
    EXPECT_NO_THROW(check_size(g, false));
}

TEST(Rectangles, MatchCellEnumeration) {
    for (const auto& e : corpus::build(4)) {
        oracle::Diagram d(e.grid);
        for (const auto& p : all_perms(e.grid.size())) {
            oracle::State s(p.size());
            for (std::size_t r = 0; r < p.size(); ++r) s[r] = p[r] - 1;
            auto mine = empty_rectangles(e.grid, p);
            auto ref = oracle::rectangles(d, s);
            ASSERT_EQ(mine.size(), ref.size()) << e.name;
            std::multiset<std::pair<Perm, int>> a, b;
            for (const auto& r : mine) {
                int o = 0;
                for (int h : r.o_hits) o += h;
                a.insert({r.to, 100 * r.x_count + o});
            }
            for (const auto& r : ref) {
                Perm to(r.to.size());
                for (std::size_t k = 0; k < to.size(); ++k) to[k] = r.to[k] + 1;
                b.insert({to, 100 * r.x_inside + static_cast<int>(r.o_rows.size())});
            }
            ASSERT_EQ(a, b) << e.name;
        }
    }
}

TEST(Differential, SquaresToZeroOnSmallCorpus) {
    for (const auto& e : corpus::build(4)) {
        const int n = e.grid.size();
        for (const auto& p : all_perms(n)) {
            ChainElement x{term(p, n)};
            ASSERT_TRUE(d_minus(e.grid, d_minus(e.grid, x)).empty()) << e.name;
            ASSERT_TRUE(d_hat(e.grid, d_hat(e.grid, x)).empty()) << e.name;
            ASSERT_TRUE(d_graded(e.grid, d_graded(e.grid, x)).empty()) << e.name;
        }
    }
}

TEST(Differential, TermsDropMaslovByOneAndAlexanderByXCount) {
    for (const auto& e : corpus::build(4)) {
        const auto& g = e.grid;
        for (const auto& p : all_perms(g.size())) {
            Term src = term(p, g.size());
            for (const auto& r : empty_rectangles(g, p)) {
                Term dst{Monomial(g.size(), 0), r.to};
                for (int c = 0; c < g.size(); ++c) dst.mono[c] = r.o_hits[c];
                ASSERT_EQ(maslov(g, src) - maslov(g, dst), 1) << e.name;
                ASSERT_EQ(alexander(g, src) - alexander(g, dst), r.x_count) << e.name;
            }
        }
    }
}

TEST(Differential, XRectanglesCancelOnTwoByTwoUnknot) {
    auto g = corpus::load_grid("unknot_2");
    // Both rectangles out of [1,2] cover one X and no O, so they cancel.
    EXPECT_EQ(empty_rectangles(g, {1, 2}).size(), 2u);
    EXPECT_TRUE(d_minus(g, ChainElement{term({1, 2}, 2)}).empty());
}

TEST(Differential, HatDropsSpecialVariables) {
    auto g = corpus::load_grid("unknot_2");
    // Out of [2,1] one rectangle covers the standard O (column 2), the other the special O.
    auto full = d_minus(g, ChainElement{term({2, 1}, 2)});
    auto hat = d_hat(g, ChainElement{term({2, 1}, 2)});
    EXPECT_EQ(full.size(), 2u);
    ASSERT_EQ(hat.size(), 1u);
    EXPECT_EQ(hat.begin()->mono, (Monomial{0, 1}));
    EXPECT_EQ(hat.begin()->perm, (Perm{1, 2}));
    EXPECT_TRUE(d_graded(g, ChainElement{term({2, 1}, 2)}) == hat);
}
