#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace floergrid {

enum class MarkKind { OStandard, OSpecial, X };

struct Cell {
    int row = 0;
    int col = 0;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Marking {
    MarkKind kind;
    int row;
    int col;
    bool is_o() const { return kind != MarkKind::X; }
    friend bool operator==(const Marking&, const Marking&) = default;
};

// Rows and columns are 1-based, counted bottom-up and left-right. The O of each row is
// stored by column; X's are a set of cells.
class GridDiagram {
public:
    GridDiagram() = default;

    GridDiagram(int n, std::vector<int> o_col_of_row, std::vector<bool> o_special, std::vector<Cell> xs,
                bool cobordism_mode = false)
        : n_(n), ocol_(std::move(o_col_of_row)), special_(std::move(o_special)), xs_(std::move(xs)),
          cobordism_(cobordism_mode) {
        if (n_ < 1) throw InvalidGrid("grid size must be positive");
        if (static_cast<int>(ocol_.size()) != n_ || static_cast<int>(special_.size()) != n_)
            throw InvalidGrid("need exactly one O per row");
        orow_.assign(n_ + 1, 0);
        for (int r = 1; r <= n_; ++r) {
            int c = ocol_[r - 1];
            if (c < 1 || c > n_) throw InvalidGrid("O in row " + std::to_string(r) + " out of range");
            if (orow_[c]) throw InvalidGrid("two O's in column " + std::to_string(c));
            orow_[c] = r;
        }
        std::sort(xs_.begin(), xs_.end());
        xgrid_.assign(static_cast<std::size_t>(n_ * n_), 0);
        for (std::size_t k = 0; k < xs_.size(); ++k) {
            const auto& x = xs_[k];
            if (x.row < 1 || x.row > n_ || x.col < 1 || x.col > n_)
                throw InvalidGrid("X at (" + std::to_string(x.row) + "," + std::to_string(x.col) + ") out of range");
            if (k && xs_[k - 1] == x)
                throw InvalidGrid("two X's in cell (" + std::to_string(x.row) + "," + std::to_string(x.col) + ")");
            if (!cobordism_ && ocol_[x.row - 1] == x.col)
                throw InvalidGrid("X and O share cell (" + std::to_string(x.row) + "," + std::to_string(x.col) + ")");
            xgrid_[idx(x.row, x.col)] = 1;
        }
    }

    int size() const { return n_; }
    bool cobordism_mode() const { return cobordism_; }
    int o_col(int row) const { return ocol_[row - 1]; }
    int o_row(int col) const { return orow_[col]; }
    bool o_special_in_row(int row) const { return special_[row - 1]; }
    bool o_special_in_col(int col) const { return special_[orow_[col] - 1]; }
    const std::vector<int>& o_cols() const { return ocol_; }
    const std::vector<bool>& specials() const { return special_; }
    const std::vector<Cell>& xs() const { return xs_; }
    bool has_x(int row, int col) const { return xgrid_[idx(row, col)] != 0; }
    bool has_o(int row, int col) const { return ocol_[row - 1] == col; }
    bool empty_cell(int row, int col) const { return !has_x(row, col) && !has_o(row, col); }

    int x_count_row(int row) const {
        int c = 0;
        for (int j = 1; j <= n_; ++j) c += has_x(row, j);
        return c;
    }
    int x_count_col(int col) const {
        int c = 0;
        for (int i = 1; i <= n_; ++i) c += has_x(i, col);
        return c;
    }
    int special_count() const { return static_cast<int>(std::count(special_.begin(), special_.end(), true)); }

    std::vector<Marking> markings() const {
        std::vector<Marking> out;
        for (int r = 1; r <= n_; ++r)
            out.push_back({special_[r - 1] ? MarkKind::OSpecial : MarkKind::OStandard, r, ocol_[r - 1]});
        for (const auto& x : xs_) out.push_back({MarkKind::X, x.row, x.col});
        return out;
    }

    GridDiagram with_cobordism_mode(bool on) const { return {n_, ocol_, special_, xs_, on}; }

    friend bool operator==(const GridDiagram& a, const GridDiagram& b) {
        return a.n_ == b.n_ && a.ocol_ == b.ocol_ && a.special_ == b.special_ && a.xs_ == b.xs_;
    }

private:
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>((r - 1) * n_ + (c - 1)); }

    int n_ = 0;
    std::vector<int> ocol_;
    std::vector<int> orow_;
    std::vector<bool> special_;
    std::vector<Cell> xs_;
    std::vector<unsigned char> xgrid_;
    bool cobordism_ = false;
};

// ---------------------------------------------------------------------------
// Text format

inline std::string serialize(const GridDiagram& g) {
    std::ostringstream os;
    os << "size " << g.size() << "\n";
    if (g.cobordism_mode()) os << "mode cobordism\n";
    for (int r = 1; r <= g.size(); ++r)
        os << "O " << r << " " << g.o_col(r) << (g.o_special_in_row(r) ? " special" : "") << "\n";
    for (const auto& x : g.xs()) os << "X " << x.row << " " << x.col << "\n";
    return os.str();
}

namespace detail {

struct Token {
    std::string text;
    int col;
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') { ++i; continue; }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
        out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

inline int to_int(const Token& t, int line) {
    int v = 0;
    std::size_t used = 0;
    try {
        v = std::stoi(t.text, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used != t.text.size() || t.text.empty()) throw ParseError(line, t.col, "expected an integer, got '" + t.text + "'");
    return v;
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) lines.push_back(l);
    return lines;
}

} // namespace detail

// Parses the grid file format, enforcing structure (syntax, permutation, one marking kind per
// cell) but not the diagram invariants checked by validate().
inline GridDiagram parse_grid_structure(const std::string& text) {
    int n = 0;
    bool cob = false;
    std::vector<int> ocol;
    std::vector<bool> special;
    std::vector<Cell> xs;
    std::vector<int> o_line_of_row, o_line_of_col;
    std::vector<std::pair<Cell, int>> x_lines;
    int lineno = 0;
    for (const auto& line : detail::split_lines(text)) {
        ++lineno;
        auto tok = detail::tokenize(line);
        if (tok.empty()) continue;
        const auto& head = tok[0];
        if (n == 0) {
            if (head.text != "size" || tok.size() != 2) throw ParseError(lineno, head.col, "expected 'size N' first");
            n = detail::to_int(tok[1], lineno);
            if (n < 1) throw ParseError(lineno, tok[1].col, "size must be positive");
            ocol.assign(n, 0);
            special.assign(n, false);
            o_line_of_row.assign(n + 1, 0);
            o_line_of_col.assign(n + 1, 0);
            continue;
        }
        if (head.text == "mode") {
            if (tok.size() != 2 || tok[1].text != "cobordism") throw ParseError(lineno, head.col, "expected 'mode cobordism'");
            cob = true;
            continue;
        }
        if (head.text != "O" && head.text != "X") throw ParseError(lineno, head.col, "unknown directive '" + head.text + "'");
        bool is_o = head.text == "O";
        std::size_t want = is_o && tok.size() == 4 ? 4 : 3;
        if (tok.size() != want) throw ParseError(lineno, head.col, "wrong number of fields");
        int r = detail::to_int(tok[1], lineno), c = detail::to_int(tok[2], lineno);
        if (r < 1 || r > n) throw ParseError(lineno, tok[1].col, "row out of range");
        if (c < 1 || c > n) throw ParseError(lineno, tok[2].col, "column out of range");
        if (is_o) {
            if (want == 4 && tok[3].text != "special") throw ParseError(lineno, tok[3].col, "expected 'special'");
            if (o_line_of_row[r]) throw ParseError(lineno, head.col, "two O's in row " + std::to_string(r));
            if (o_line_of_col[c]) throw ParseError(lineno, head.col, "two O's in column " + std::to_string(c));
            o_line_of_row[r] = o_line_of_col[c] = lineno;
            ocol[r - 1] = c;
            special[r - 1] = want == 4;
        } else {
            for (const auto& [cell, l] : x_lines)
                if (cell.row == r && cell.col == c) throw ParseError(lineno, head.col, "duplicate X in cell");
            x_lines.push_back({{r, c}, lineno});
            xs.push_back({r, c});
        }
    }
    if (n == 0) throw ParseError(lineno + 1, 1, "missing 'size N' line");
    for (int r = 1; r <= n; ++r)
        if (!o_line_of_row[r]) throw ParseError(lineno + 1, 1, "O's are not a permutation: no O in row " + std::to_string(r));
    if (!cob)
        for (const auto& [cell, l] : x_lines)
            if (ocol[cell.row - 1] == cell.col) throw ParseError(l, 1, "X and O share a cell outside cobordism mode");
    return {n, ocol, special, xs, cob};
}

// ---------------------------------------------------------------------------
// Validation and structure

struct Violation {
    std::string rule;
    int row = 0;  // 0 when not applicable
    int col = 0;
    std::string detail;
};

struct Component {
    std::vector<Marking> markings;
    int special_count = 0;
    int o_count = 0;
    int x_count = 0;
};

inline std::vector<Component> components(const GridDiagram& g) {
    const int n = g.size();
    auto marks = g.markings();
    std::vector<int> parent(marks.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    // Markings 0..n-1 are the O's indexed by row.
    for (std::size_t k = n; k < marks.size(); ++k) {
        const auto& x = marks[k];
        unite(static_cast<int>(k), g.o_row(x.col) - 1);
        unite(static_cast<int>(k), x.row - 1);
    }
    std::vector<int> slot(marks.size(), -1);
    std::vector<Component> out;
    for (std::size_t k = 0; k < marks.size(); ++k) {
        int root = find(static_cast<int>(k));
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(out.size());
            out.emplace_back();
        }
        auto& comp = out[slot[root]];
        comp.markings.push_back(marks[k]);
        if (marks[k].kind == MarkKind::OSpecial) ++comp.special_count;
        if (marks[k].is_o()) ++comp.o_count; else ++comp.x_count;
    }
    return out;
}

inline std::vector<Violation> validate(const GridDiagram& g) {
    std::vector<Violation> v;
    const int n = g.size();
    for (int r = 1; r <= n; ++r)
        if (g.x_count_row(r) == 0) v.push_back({"sink-source", r, 0, "no X in row " + std::to_string(r)});
    for (int c = 1; c <= n; ++c)
        if (g.x_count_col(c) == 0) v.push_back({"sink-source", 0, c, "no X in column " + std::to_string(c)});
    for (int r = 1; r <= n; ++r) {
        int c = g.o_col(r);
        int in_row = g.x_count_row(r), in_col = g.x_count_col(c);
        if (in_row != in_col)
            v.push_back({"balance", r, c,
                         "O has " + std::to_string(in_row) + " X's in its row and " + std::to_string(in_col) +
                             " in its column"});
    }
    if (!g.cobordism_mode()) {
        for (const auto& comp : components(g)) {
            if (comp.special_count > 0) continue;
            const auto& m = comp.markings.front();
            v.push_back({"special-per-component", m.row, m.col, "component has no special O"});
        }
    }
    return v;
}

inline std::string describe(const std::vector<Violation>& vs) {
    std::string s;
    for (const auto& v : vs) {
        if (!s.empty()) s += "; ";
        s += v.rule + ": " + v.detail;
        if (v.row && v.col) s += " at (" + std::to_string(v.row) + "," + std::to_string(v.col) + ")";
    }
    return s;
}

inline GridDiagram parse_grid(const std::string& text) {
    auto g = parse_grid_structure(text);
    auto vs = validate(g);
    if (!vs.empty()) throw InvalidGrid(describe(vs));
    return g;
}

// Weight of each O, indexed by column (index 0 unused).
inline std::vector<int> weights(const GridDiagram& g) {
    std::vector<int> m(g.size() + 1, 0);
    for (int c = 1; c <= g.size(); ++c) {
        int r = g.o_row(c);
        int in_row = g.x_count_row(r), in_col = g.x_count_col(c);
        if (in_row != in_col)
            throw InvalidGrid("balance violation at O (" + std::to_string(r) + "," + std::to_string(c) + ")");
        m[c] = in_col;
    }
    return m;
}

inline bool is_link_grid(const GridDiagram& g) {
    for (int r = 1; r <= g.size(); ++r)
        if (g.x_count_row(r) != 1 || g.x_count_col(r) != 1) return false;
    return true;
}

inline bool is_tight(const GridDiagram& g) {
    for (const auto& c : components(g))
        if (c.special_count != 1) return false;
    return true;
}

inline GridDiagram transpose(const GridDiagram& g) {
    const int n = g.size();
    std::vector<int> ocol(n);
    std::vector<bool> sp(n);
    for (int r = 1; r <= n; ++r) {
        int c = g.o_col(r);
        ocol[c - 1] = r;
        sp[c - 1] = g.o_special_in_row(r);
    }
    std::vector<Cell> xs;
    for (const auto& x : g.xs()) xs.push_back({x.col, x.row});
    return {n, ocol, sp, xs, g.cobordism_mode()};
}

// ---------------------------------------------------------------------------
// Column band geometry for commuting columns col and col+1.
//
// Heights are measured on a circle of circumference 8n: the horizontal grid line at lattice
// height h sits at 8h and a marking in row r at 8r-4. The arc endpoints a (left-column arc
// below, right-column arc above) and b (the reverse) sit strictly between lines, either in the
// slot 8r-2 just above row r's markings or on a row shared by both columns, whose two markings
// are then nudged to 8r-5 and 8r-3.

struct BandMark {
    Marking mark;
    int side;    // 0 = left column, 1 = right column
    int height;  // scale-8 position
};

struct ColumnBand {
    int col = 0;
    int n = 0;
    int a = 0;
    int b = 0;
    std::vector<BandMark> marks;

    int circumference() const { return 8 * n; }
    // Distance travelled going up from p to q.
    int up(int p, int q) const { return ((q - p) % circumference() + circumference()) % circumference(); }
    bool strictly_between(int lo, int p, int hi) const { return p != lo && up(lo, p) < up(lo, hi); }
    // True if height p lies on the right-column arc (from a up to b).
    bool on_right_arc(int p) const { return strictly_between(a, p, b); }
};

struct BandResult {
    std::optional<ColumnBand> band;
    std::string reason;
};

inline BandResult column_band(const GridDiagram& g, int col, bool strict = false) {
    const int n = g.size();
    if (col < 1 || col >= n) return {std::nullopt, "column index out of range"};
    auto in_col = [&](int r, int c) { return g.has_x(r, c) || g.has_o(r, c); };
    std::vector<int> shared;
    for (int r = 1; r <= n; ++r)
        if (in_col(r, col) && in_col(r, col + 1)) shared.push_back(r);
    if (strict && !shared.empty()) return {std::nullopt, "row " + std::to_string(shared.front()) + " has markings in both columns"};
    if (shared.size() > 2) return {std::nullopt, "more than two rows have markings in both columns"};

    auto build = [&](int a, int b, int a_row, int b_row) {
        ColumnBand band{col, n, a, b, {}};
        for (int r = 1; r <= n; ++r)
            for (int side = 0; side < 2; ++side) {
                int c = col + side;
                int h = 8 * r - 4;
                if (r == a_row) h += side ? 1 : -1;
                if (r == b_row) h += side ? -1 : 1;
                if (g.has_o(r, c))
                    band.marks.push_back({{g.o_special_in_row(r) ? MarkKind::OSpecial : MarkKind::OStandard, r, c}, side, h});
                if (g.has_x(r, c)) band.marks.push_back({{MarkKind::X, r, c}, side, h});
            }
        return band;
    };
    auto legal = [](const ColumnBand& band) {
        for (const auto& m : band.marks) {
            if (m.height == band.a || m.height == band.b) return false;
            if (band.on_right_arc(m.height) != (m.side == 1)) return false;
        }
        return true;
    };
    struct Slot { int pos; int row; };  // row > 0 marks a shared row used as endpoint
    std::vector<Slot> slots;
    for (int r = 1; r <= n; ++r) slots.push_back({8 * r - 2, 0});
    for (int r : shared) slots.push_back({8 * r - 4, r});

    for (const auto& sa : slots)
        for (const auto& sb : slots) {
            if (sa.pos == sb.pos) continue;
            auto band = build(sa.pos, sb.pos, sa.row, sb.row);
            if (!legal(band)) continue;
            // Canonical endpoints: a free endpoint sits just above the highest marking of the arc
            // below it, which keeps the choice symmetric under exchanging the two columns.
            auto snap = [&](int endpoint, int endpoint_row, int below_side) {
                if (endpoint_row) return endpoint;
                int best = -1, best_d = 1 << 30;
                for (const auto& m : band.marks) {
                    if (m.side != below_side) continue;
                    int d = band.up(m.height, endpoint);
                    if (d < best_d) { best_d = d; best = m.mark.row; }
                }
                return 8 * best - 2;
            };
            int a = snap(sa.pos, sa.row, 0), b = snap(sb.pos, sb.row, 1);
            auto canon = build(a, b, sa.row, sb.row);
            if (!legal(canon)) throw Error("internal: canonical commutation endpoints are not legal");
            return {canon, ""};
        }
    return {std::nullopt, "marking heights of columns " + std::to_string(col) + " and " + std::to_string(col + 1) +
                              " interleave"};
}

// ---------------------------------------------------------------------------
// Moves

enum class MoveKind {
    CyclicRow, CyclicCol, CommuteCols, CommuteRows, StabilizeRow, StabilizeCol, Destabilize,
    Birth, Death, XSaddle, OSaddle, Renumber
};

struct GridMove {
    MoveKind kind;
    int row = 0;       // or the index for commutations; top/right = 1 for cyclic moves
    int col = 0;
    std::vector<int> perm;

    bool is_isotopy() const {
        return kind != MoveKind::Birth && kind != MoveKind::Death && kind != MoveKind::XSaddle &&
               kind != MoveKind::OSaddle;
    }
    friend bool operator==(const GridMove&, const GridMove&) = default;
};

inline std::string to_string(const GridMove& m) {
    auto rc = [&](const char* verb) { return std::string(verb) + " " + std::to_string(m.row) + " " + std::to_string(m.col); };
    switch (m.kind) {
    case MoveKind::CyclicRow: return std::string("cyclic-row ") + (m.row ? "top" : "bottom");
    case MoveKind::CyclicCol: return std::string("cyclic-col ") + (m.row ? "right" : "left");
    case MoveKind::CommuteCols: return "commute-cols " + std::to_string(m.row);
    case MoveKind::CommuteRows: return "commute-rows " + std::to_string(m.row);
    case MoveKind::StabilizeRow: return rc("stabilize-row");
    case MoveKind::StabilizeCol: return rc("stabilize-col");
    case MoveKind::Destabilize: return rc("destabilize");
    case MoveKind::Birth: return rc("birth");
    case MoveKind::Death: return rc("death");
    case MoveKind::XSaddle: return rc("xsaddle");
    case MoveKind::OSaddle: return rc("osaddle");
    case MoveKind::Renumber: {
        std::string s = "renumber";
        for (int p : m.perm) s += " " + std::to_string(p);
        return s;
    }
    }
    return "?";
}

inline GridMove parse_move(const std::string& line, int lineno = 1) {
    auto tok = detail::tokenize(line);
    if (tok.empty()) throw ParseError(lineno, 1, "empty move");
    const auto& v = tok[0].text;
    auto need = [&](std::size_t k) {
        if (tok.size() != k + 1) throw ParseError(lineno, tok[0].col, "'" + v + "' takes " + std::to_string(k) + " argument(s)");
    };
    auto num = [&](std::size_t i) { return detail::to_int(tok[i], lineno); };
    if (v == "cyclic-row" || v == "cyclic-col") {
        need(1);
        const auto& d = tok[1].text;
        bool row = v == "cyclic-row";
        if (row && d != "top" && d != "bottom") throw ParseError(lineno, tok[1].col, "expected top|bottom");
        if (!row && d != "left" && d != "right") throw ParseError(lineno, tok[1].col, "expected left|right");
        return {row ? MoveKind::CyclicRow : MoveKind::CyclicCol, (d == "top" || d == "right") ? 1 : 0, 0, {}};
    }
    if (v == "commute-cols" || v == "commute-rows") {
        need(1);
        return {v == "commute-cols" ? MoveKind::CommuteCols : MoveKind::CommuteRows, num(1), 0, {}};
    }
    static const std::pair<const char*, MoveKind> two_arg[] = {
        {"stabilize-row", MoveKind::StabilizeRow}, {"stabilize-col", MoveKind::StabilizeCol},
        {"destabilize", MoveKind::Destabilize},    {"birth", MoveKind::Birth},
        {"death", MoveKind::Death},                {"xsaddle", MoveKind::XSaddle},
        {"osaddle", MoveKind::OSaddle}};
    for (const auto& [name, kind] : two_arg)
        if (v == name) {
            need(2);
            return {kind, num(1), num(2), {}};
        }
    if (v == "renumber") {
        GridMove m{MoveKind::Renumber, 0, 0, {}};
        for (std::size_t i = 1; i < tok.size(); ++i) m.perm.push_back(num(i));
        return m;
    }
    throw ParseError(lineno, tok[0].col, "unknown move '" + v + "'");
}

struct MoveOptions {
    bool strict_commutation = false;
};

struct MoveResult {
    GridDiagram grid;
    std::vector<std::string> warnings;
};

namespace detail {

// Builds a diagram from explicit marking lists, keeping the cobordism flag.
struct Builder {
    int n;
    std::vector<int> ocol;
    std::vector<bool> sp;
    std::vector<Cell> xs;

    explicit Builder(const GridDiagram& g) : n(g.size()), ocol(g.o_cols()), sp(g.specials()), xs(g.xs()) {}

    void remap(auto&& row_map, auto&& col_map, int new_n) {
        std::vector<int> oc(new_n, 0);
        std::vector<bool> s(new_n, false);
        for (int r = 1; r <= n; ++r) {
            int nr = row_map(r);
            oc[nr - 1] = col_map(ocol[r - 1]);
            s[nr - 1] = sp[r - 1];
        }
        for (auto& x : xs) x = {row_map(x.row), col_map(x.col)};
        ocol = std::move(oc);
        sp = std::move(s);
        n = new_n;
    }
    void erase_x(Cell c) { xs.erase(std::remove(xs.begin(), xs.end(), c), xs.end()); }
    GridDiagram build(bool cob) const { return {n, ocol, sp, xs, cob}; }
};

inline std::string cell_str(int r, int c) { return "(" + std::to_string(r) + "," + std::to_string(c) + ")"; }

} // namespace detail

inline MoveResult apply_move(const GridDiagram& g, const GridMove& mv, const MoveOptions& opt = {}) {
    const int n = g.size();
    auto in_range = [&](int r, int c) { return r >= 1 && r <= n && c >= 1 && c <= n; };
    auto fail = [&](const std::string& why) -> MoveResult { throw IllegalMove(to_string(mv) + ": " + why); };
    detail::Builder b(g);
    std::vector<std::string> warnings;
    bool cob = g.cobordism_mode();

    switch (mv.kind) {
    case MoveKind::CyclicRow: {
        bool top = mv.row != 0;
        b.remap([&](int r) { return top ? r % n + 1 : (r + n - 2) % n + 1; }, [](int c) { return c; }, n);
        break;
    }
    case MoveKind::CyclicCol: {
        bool right = mv.row != 0;
        b.remap([](int r) { return r; }, [&](int c) { return right ? c % n + 1 : (c + n - 2) % n + 1; }, n);
        break;
    }
    case MoveKind::CommuteCols: {
        auto res = column_band(g, mv.row, opt.strict_commutation);
        if (!res.band) return fail("commutation illegal: " + res.reason);
        int i = mv.row;
        b.remap([](int r) { return r; }, [&](int c) { return c == i ? i + 1 : c == i + 1 ? i : c; }, n);
        break;
    }
    case MoveKind::CommuteRows: {
        GridMove t{MoveKind::CommuteCols, mv.row, 0, {}};
        try {
            auto r = apply_move(transpose(g), t, opt);
            return {transpose(r.grid), r.warnings};
        } catch (const IllegalMove& e) {
            return fail(std::string("row ") + e.what());
        }
    }
    case MoveKind::StabilizeRow: {
        int r = mv.row, c = mv.col;
        if (!in_range(r, c) || !g.has_x(r, c)) return fail("no X at " + detail::cell_str(r, c));
        b.remap([&](int rr) { return rr > r ? rr + 1 : rr; }, [&](int cc) { return cc >= c ? cc + 1 : cc; }, n + 1);
        // Old X now sits at (r, c+1); it moves up into the new row.
        b.erase_x({r, c + 1});
        b.xs.push_back({r + 1, c + 1});
        b.xs.push_back({r, c});
        b.ocol[r] = c;  // new row r+1
        b.sp[r] = false;
        break;
    }
    case MoveKind::StabilizeCol: {
        if (!in_range(mv.row, mv.col) || !g.has_x(mv.row, mv.col)) return fail("no X at " + detail::cell_str(mv.row, mv.col));
        auto r = apply_move(transpose(g), {MoveKind::StabilizeRow, mv.col, mv.row, {}}, opt);
        return {transpose(r.grid), r.warnings};
    }
    case MoveKind::Destabilize: {
        int r = mv.row, c = mv.col;
        if (!in_range(r, c) || !g.has_o(r, c)) return fail("no O at " + detail::cell_str(r, c));
        if (n < 2) return fail("cannot destabilize a 1x1 grid");
        if (g.x_count_row(r) != 1 || g.x_count_col(c) != 1) return fail("O's row and column must each hold exactly one X");
        int xc = 0, xr = 0;
        for (int j = 1; j <= n; ++j) if (g.has_x(r, j)) xc = j;
        for (int i = 1; i <= n; ++i) if (g.has_x(i, c)) xr = i;
        if (std::abs(xc - c) != 1 || std::abs(xr - r) != 1) return fail("X's must be adjacent to the O");
        if (g.has_x(xr, xc)) return fail("diagonal cell " + detail::cell_str(xr, xc) + " holds an X");
        if (g.has_o(xr, xc) && !cob) return fail("diagonal cell " + detail::cell_str(xr, xc) + " holds an O");
        if (g.o_special_in_row(r)) {
            int others = 0;
            for (const auto& comp : components(g))
                for (const auto& m : comp.markings)
                    if (m.is_o() && m.row == r) others = comp.special_count - 1;
            if (others < 1) return fail("special O is the only special marking of its component");
            warnings.push_back("destabilized at a special O; its component keeps another special O");
        }
        b.erase_x({r, xc});
        b.erase_x({xr, c});
        b.xs.push_back({xr, xc});
        // Drop row r and column c.
        std::vector<int> oc;
        std::vector<bool> s;
        for (int rr = 1; rr <= n; ++rr) {
            if (rr == r) continue;
            int cc = b.ocol[rr - 1];
            oc.push_back(cc > c ? cc - 1 : cc);
            s.push_back(b.sp[rr - 1]);
        }
        for (auto& x : b.xs) x = {x.row > r ? x.row - 1 : x.row, x.col > c ? x.col - 1 : x.col};
        b.ocol = std::move(oc);
        b.sp = std::move(s);
        b.n = n - 1;
        break;
    }
    case MoveKind::Birth: {
        int r = mv.row, c = mv.col;
        if (r < 1 || r > n + 1 || c < 1 || c > n + 1) return fail("birth position out of range");
        b.remap([&](int rr) { return rr >= r ? rr + 1 : rr; }, [&](int cc) { return cc >= c ? cc + 1 : cc; }, n + 1);
        b.ocol[r - 1] = c;
        b.sp[r - 1] = false;
        b.xs.push_back({r, c});
        cob = true;
        break;
    }
    case MoveKind::Death: {
        int r = mv.row, c = mv.col;
        if (!in_range(r, c) || !g.has_x(r, c) || !g.has_o(r, c)) return fail("cell " + detail::cell_str(r, c) + " must hold both an X and an O");
        if (g.x_count_row(r) != 1 || g.x_count_col(c) != 1) return fail("the X must be the only X in its row and column");
        if (n < 2) return fail("cannot remove the last row");
        if (g.o_special_in_row(r))
            warnings.push_back("death at a special O is only legal under the special-O death convention");
        b.erase_x({r, c});
        std::vector<int> oc;
        std::vector<bool> s;
        for (int rr = 1; rr <= n; ++rr) {
            if (rr == r) continue;
            int cc = b.ocol[rr - 1];
            oc.push_back(cc > c ? cc - 1 : cc);
            s.push_back(b.sp[rr - 1]);
        }
        for (auto& x : b.xs) x = {x.row > r ? x.row - 1 : x.row, x.col > c ? x.col - 1 : x.col};
        b.ocol = std::move(oc);
        b.sp = std::move(s);
        b.n = n - 1;
        cob = true;
        break;
    }
    case MoveKind::XSaddle:
    case MoveKind::OSaddle: {
        int r = mv.row, c = mv.col;
        if (!in_range(r, c) || !in_range(r + 1, c + 1)) return fail("2x2 square out of range");
        if (!g.empty_cell(r, c) || !g.empty_cell(r + 1, c + 1)) return fail("lower-left and upper-right cells must be empty");
        if (mv.kind == MoveKind::XSaddle) {
            if (!g.has_x(r + 1, c) || !g.has_x(r, c + 1)) return fail("upper-left and lower-right cells must hold X's");
            b.erase_x({r + 1, c});
            b.erase_x({r, c + 1});
            b.xs.push_back({r + 1, c + 1});
            b.xs.push_back({r, c});
        } else {
            if (!g.has_o(r + 1, c) || !g.o_special_in_row(r + 1)) return fail("upper-left cell must hold a special O");
            if (!g.has_o(r, c + 1) || g.o_special_in_row(r)) return fail("lower-right cell must hold a standard O");
            b.ocol[r] = c + 1;
            b.ocol[r - 1] = c;
            b.sp[r] = true;
            b.sp[r - 1] = true;
        }
        cob = true;
        break;
    }
    case MoveKind::Renumber: {
        auto p = mv.perm;
        std::sort(p.begin(), p.end());
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 1);
        if (p != id) return fail("not a permutation of 1.." + std::to_string(n));
        break;
    }
    }

    GridDiagram out;
    try {
        out = b.build(cob);
    } catch (const InvalidGrid& e) {
        return fail(e.what());
    }
    auto vs = validate(out);
    if (!vs.empty()) return fail("result is invalid: " + describe(vs));
    return {out, warnings};
}

inline std::vector<GridMove> parse_moves(const std::string& text) {
    std::vector<GridMove> out;
    int lineno = 0;
    for (const auto& line : detail::split_lines(text)) {
        ++lineno;
        if (detail::tokenize(line).empty()) continue;
        out.push_back(parse_move(line, lineno));
    }
    return out;
}

} // namespace floergrid
