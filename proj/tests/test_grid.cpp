#include <gtest/gtest.h>

#include "floergrid/grid.hpp"
#include "support/corpus.hpp"

using namespace floergrid;

namespace {

const char* kUnknot2 = "size 2\nO 1 2\nO 2 1 special\nX 1 1\nX 2 2\n";

GridDiagram unknot2() { return parse_grid(kUnknot2); }

bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
    for (const auto& v : vs)
        if (v.rule == rule) return true;
    return false;
}

} // namespace

TEST(GridFormat, ParsesTwoByTwoUnknot) {
    auto g = unknot2();
    EXPECT_EQ(g.size(), 2);
    EXPECT_EQ(g.o_col(1), 2);
    EXPECT_EQ(g.o_col(2), 1);
    EXPECT_TRUE(g.o_special_in_row(2));
    EXPECT_FALSE(g.o_special_in_row(1));
    EXPECT_TRUE(g.has_x(1, 1));
    EXPECT_TRUE(g.has_x(2, 2));
    EXPECT_EQ(components(g).size(), 1u);
    EXPECT_TRUE(is_link_grid(g));
    EXPECT_TRUE(is_tight(g));
}

TEST(GridFormat, SerializeRoundTripsCorpus) {
    for (const auto& e : corpus::build()) {
        auto text = serialize(e.grid);
        EXPECT_EQ(parse_grid(text), e.grid) << e.name;
        EXPECT_EQ(serialize(parse_grid(text)), text) << e.name;
    }
}

TEST(GridFormat, CommentsBlankLinesAndOrderAreIgnored) {
    auto g = parse_grid("# unknot\n\nsize 2   # two\nX 2 2\nO 2 1 special\n\nX 1 1\nO 1 2\n");
    EXPECT_EQ(g, unknot2());
}

TEST(GridFormat, ReportsLineAndColumnOfErrors) {
    try {
        parse_grid("size 2\nO 1 2\n  Q 2 1\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3);
        EXPECT_EQ(e.col, 3);
    }
    try {
        parse_grid("size 2\nO 1 x\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 2);
        EXPECT_EQ(e.col, 5);
    }
    EXPECT_THROW(parse_grid("O 1 1\n"), ParseError);
    EXPECT_THROW(parse_grid("size 2\nO 1 2\nO 2 2\nX 1 1\nX 2 1\n"), ParseError);
    EXPECT_THROW(parse_grid("size 2\nO 1 2\nX 1 1\nX 2 2\n"), ParseError);
    EXPECT_THROW(parse_grid("size 2\nO 1 2\nO 2 1 specail\nX 1 1\nX 2 2\n"), ParseError);
    EXPECT_THROW(parse_grid("size 2\nO 1 1\nO 2 2 special\nX 1 1\nX 2 1\n"), ParseError);
}

TEST(GridValidation, SinkSourceViolation) {
    auto g = parse_grid_structure("size 2\nO 1 2 special\nO 2 1\nX 1 1\n");
    auto vs = validate(g);
    EXPECT_TRUE(has_rule(vs, "sink-source"));
    EXPECT_THROW(parse_grid(serialize(g)), InvalidGrid);
}

TEST(GridValidation, BalanceViolation) {
    // Row 1 holds two X's while column 1 holds one.
    auto g = parse_grid_structure("size 3\nO 1 1 special\nO 2 2\nO 3 3\nX 1 2\nX 1 3\nX 2 1\nX 3 2\n");
    EXPECT_TRUE(has_rule(validate(g), "balance"));
    EXPECT_THROW(weights(g), InvalidGrid);
}

TEST(GridValidation, ComponentWithoutSpecialO) {
    auto g = parse_grid_structure("size 2\nO 1 2\nO 2 1\nX 1 1\nX 2 2\n");
    EXPECT_TRUE(has_rule(validate(g), "special-per-component"));
    auto cob = parse_grid_structure("size 2\nmode cobordism\nO 1 2\nO 2 1\nX 1 1\nX 2 2\n");
    EXPECT_TRUE(validate(cob).empty());
}

TEST(GridValidation, WeightsOfGraphGrid) {
    std::mt19937 rng(5);
    auto g = corpus::random_graph(5, rng);
    ASSERT_TRUE(g.has_value());
    auto m = weights(*g);
    int heavy = 0;
    for (int c = 1; c <= g->size(); ++c) heavy += m[c] == 2;
    EXPECT_EQ(heavy, 2);
    EXPECT_FALSE(is_link_grid(*g));
}

TEST(GridComponents, HopfAndUnlinkCounts) {
    EXPECT_EQ(components(corpus::load_grid("hopf_positive")).size(), 2u);
    EXPECT_EQ(components(corpus::load_grid("unlink_2")).size(), 2u);
    EXPECT_EQ(components(corpus::load_grid("unlink_3")).size(), 3u);
    EXPECT_EQ(components(corpus::load_grid("figure_eight")).size(), 1u);
}

TEST(GridMoves, CyclicPermutationsAreInverse) {
    auto g = corpus::load_grid("trefoil_right");
    auto up = apply_move(g, parse_move("cyclic-row top")).grid;
    EXPECT_NE(up, g);
    EXPECT_EQ(apply_move(up, parse_move("cyclic-row bottom")).grid, g);
    auto right = apply_move(g, parse_move("cyclic-col right")).grid;
    EXPECT_EQ(apply_move(right, parse_move("cyclic-col left")).grid, g);
}

TEST(GridMoves, StabilizeThenDestabilizeReturns) {
    auto g = unknot2();
    auto s = apply_move(g, parse_move("stabilize-row 1 1")).grid;
    EXPECT_EQ(s.size(), 3);
    EXPECT_TRUE(validate(s).empty());
    bool back = false;
    for (int r = 1; r <= 3; ++r) {
        try {
            auto d = apply_move(s, {MoveKind::Destabilize, r, s.o_col(r), {}});
            if (d.grid == g) back = true;
        } catch (const IllegalMove&) {
        }
    }
    EXPECT_TRUE(back);
    auto sc = apply_move(g, parse_move("stabilize-col 2 2")).grid;
    EXPECT_EQ(sc.size(), 3);
    EXPECT_TRUE(validate(sc).empty());
}

TEST(GridMoves, IllegalMovesThrow) {
    auto g = unknot2();
    EXPECT_THROW(apply_move(g, parse_move("stabilize-row 1 2")), IllegalMove);
    EXPECT_THROW(apply_move(g, parse_move("destabilize 1 1")), IllegalMove);
    EXPECT_THROW(apply_move(g, parse_move("death 1 1")), IllegalMove);
    EXPECT_THROW(apply_move(g, parse_move("renumber 1 1")), IllegalMove);
    EXPECT_THROW(apply_move(g, parse_move("commute-cols 2")), IllegalMove);
}

TEST(GridMoves, InterleavedColumnsCannotCommute) {
    // Column 1 spans rows 1..3 and column 2 spans rows 2..4: the arcs interleave.
    auto g = parse_grid("size 4\nO 1 1 special\nO 2 2\nO 3 3\nO 4 4\nX 1 4\nX 2 3\nX 3 1\nX 4 2\n");
    EXPECT_THROW(apply_move(g, parse_move("commute-cols 1")), IllegalMove);
    // In the 2x2 unknot both rows are arc endpoints, which is allowed.
    EXPECT_NO_THROW(apply_move(unknot2(), parse_move("commute-cols 1")));
}

TEST(GridMoves, CommutationLegalityFollowsArcSeparation) {
    auto s = corpus::apply(unknot2(), "stabilize-row 1 1");
    EXPECT_NO_THROW(apply_move(s, parse_move("commute-cols 1")));
    EXPECT_THROW(apply_move(s, parse_move("commute-cols 1"), MoveOptions{true}), IllegalMove);
}

TEST(GridMoves, BirthAndDeathEnterCobordismMode) {
    auto g = unknot2();
    auto b = apply_move(g, parse_move("birth 2 2")).grid;
    EXPECT_TRUE(b.cobordism_mode());
    EXPECT_EQ(b.size(), 3);
    EXPECT_TRUE(b.has_x(2, 2));
    EXPECT_TRUE(b.has_o(2, 2));
    auto d = apply_move(b, parse_move("death 2 2")).grid;
    EXPECT_EQ(d.with_cobordism_mode(false), g);
}

TEST(GridMoves, SaddlesRewireMarkings) {
    auto h = corpus::load_grid("hopf_positive");
    auto x = apply_move(h, parse_move("xsaddle 1 1")).grid;
    EXPECT_TRUE(x.has_x(1, 1));
    EXPECT_TRUE(x.has_x(2, 2));
    EXPECT_FALSE(x.has_x(1, 2));
    EXPECT_TRUE(x.cobordism_mode());
    EXPECT_EQ(components(x).size(), 1u);
}

TEST(GridMoves, ParseAndPrintAgree) {
    for (const char* s : {"cyclic-row top", "cyclic-col left", "commute-cols 3", "commute-rows 2", "stabilize-row 1 2",
                          "stabilize-col 2 1", "destabilize 3 3", "birth 1 1", "death 2 2", "xsaddle 1 1",
                          "osaddle 2 3", "renumber 2 1 3"})
        EXPECT_EQ(to_string(parse_move(s)), s);
    EXPECT_THROW(parse_move("twist 1"), ParseError);
    EXPECT_THROW(parse_move("cyclic-row up"), ParseError);
    EXPECT_THROW(parse_move("birth 1"), ParseError);
}

TEST(GridTranspose, IsAnInvolution) {
    for (const auto& e : corpus::build(5)) EXPECT_EQ(transpose(transpose(e.grid)), e.grid) << e.name;
}

TEST(GridMoves, CyclicRowHasPeriodN) {
    for (const auto& e : corpus::build(6)) {
        auto g = e.grid;
        for (int k = 0; k < e.grid.size(); ++k) g = apply_move(g, parse_move("cyclic-row top")).grid;
        EXPECT_EQ(g, e.grid) << e.name;
    }
}

TEST(GridMoves, CommutationLegalityIsSymmetricAndRowCycleInvariant) {
    for (const auto& e : corpus::build(5)) {
        const auto& g = e.grid;
        auto rolled = apply_move(g, parse_move("cyclic-row top")).grid;
        for (int i = 1; i < g.size(); ++i) {
            bool legal = column_band(g, i).band.has_value();
            EXPECT_EQ(legal, column_band(rolled, i).band.has_value()) << e.name << " col " << i;
            if (legal) {
                auto h = apply_move(g, {MoveKind::CommuteCols, i, 0, {}}).grid;
                EXPECT_TRUE(column_band(h, i).band.has_value()) << e.name << " col " << i;
            }
        }
    }
}
