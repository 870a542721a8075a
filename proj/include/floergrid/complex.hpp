#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "half_int.hpp"

namespace floergrid {

// perm[r-1] is the vertical line (1..n) carrying the generator's point in row r; that point sits
// at lattice coordinates (perm[r-1]-1, r-1).
using Perm = std::vector<int>;

struct Generator {
    Perm perm;
    int maslov = 0;
    int alex = 0;
};

inline int size_cap() {
    if (const char* env = std::getenv("FLOERGRID_MAX_N")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return 8;
}

inline void check_size(const GridDiagram& g, bool override_cap) {
    if (!override_cap && g.size() > size_cap())
        throw SizeCapExceeded("grid size " + std::to_string(g.size()) + " exceeds cap " + std::to_string(size_cap()) +
                              " (use --override-size-cap or FLOERGRID_MAX_N)");
}

// ---------------------------------------------------------------------------
// J pairing. Coordinates are doubled so lattice points and square centers are both integral.

struct WeightedPoint {
    int x2;
    int y2;
    int weight = 1;
};
using PointSet = std::vector<WeightedPoint>;

// Twice J(A, B): weighted count of pairs (a, b) with b strictly north-east or south-west of a.
inline std::int64_t j_twice(const PointSet& a, const PointSet& b) {
    std::int64_t t = 0;
    for (const auto& p : a)
        for (const auto& q : b) {
            bool ne = q.x2 > p.x2 && q.y2 > p.y2;
            bool sw = q.x2 < p.x2 && q.y2 < p.y2;
            if (ne || sw) t += static_cast<std::int64_t>(p.weight) * q.weight;
        }
    return t;
}

inline HalfInt j_pair(const PointSet& a, const PointSet& b) { return HalfInt::from_twice(j_twice(a, b)); }

inline PointSet lattice_points(const Perm& x) {
    PointSet s;
    for (std::size_t r = 0; r < x.size(); ++r) s.push_back({2 * (x[r] - 1), 2 * static_cast<int>(r)});
    return s;
}
inline PointSet o_points(const GridDiagram& g) {
    PointSet s;
    for (int r = 1; r <= g.size(); ++r) s.push_back({2 * g.o_col(r) - 1, 2 * r - 1});
    return s;
}
inline PointSet x_points(const GridDiagram& g) {
    PointSet s;
    for (const auto& x : g.xs()) s.push_back({2 * x.col - 1, 2 * x.row - 1});
    return s;
}
inline PointSet negate(PointSet s) {
    for (auto& p : s) p.weight = -p.weight;
    return s;
}
inline PointSet join(PointSet a, const PointSet& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline int maslov(const GridDiagram& g, const Perm& x) {
    auto d = join(lattice_points(x), negate(o_points(g)));
    auto t = j_twice(d, d);
    if (t % 2) throw Error("internal: odd Maslov pairing");
    return static_cast<int>(t / 2) + 1;
}

inline int alexander(const GridDiagram& g, const Perm& x) {
    auto m = weights(g);
    PointSet target = x_points(g);
    for (int c = 1; c <= g.size(); ++c) target.push_back({2 * c - 1, 2 * g.o_row(c) - 1, -m[c]});
    auto t = j_twice(lattice_points(x), target);
    if (t % 2) throw Error("internal: odd Alexander pairing");
    return static_cast<int>(t / 2);
}

inline Generator make_generator(const GridDiagram& g, Perm p) {
    Generator x{std::move(p), 0, 0};
    x.maslov = maslov(g, x.perm);
    x.alex = alexander(g, x.perm);
    return x;
}

// Lexicographic rank of a permutation of 1..n.
inline std::uint32_t perm_rank(const Perm& p) {
    const int n = static_cast<int>(p.size());
    std::uint32_t rank = 0;
    std::uint32_t used = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int v = 1; v < p[i]; ++v) smaller += !((used >> v) & 1u);
        rank = rank * static_cast<std::uint32_t>(n - i) + static_cast<std::uint32_t>(smaller);
        used |= 1u << p[i];
    }
    return rank;
}

inline std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p(n);
    std::iota(p.begin(), p.end(), 1);
    do out.push_back(p); while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline std::vector<Generator> generators(const GridDiagram& g, bool override_cap = false) {
    check_size(g, override_cap);
    std::vector<Generator> out;
    for (auto& p : all_perms(g.size())) out.push_back(make_generator(g, std::move(p)));
    return out;
}

// ---------------------------------------------------------------------------
// Rectangles

struct RectangleData {
    Perm from;
    Perm to;
    std::vector<int> o_hits;  // indexed by O column - 1
    int x_count = 0;
    int bottom_row = 0;       // 1-based rows of the two moving points; the rectangle runs up
    int top_row = 0;          // from bottom_row to top_row, possibly through the top edge
    bool empty = true;
};

// The toroidal rectangle from x whose lower-left corner is x's point in row `bottom` and whose
// upper-right corner is x's point in row `top`.
inline RectangleData rectangle(const GridDiagram& g, const Perm& x, int bottom, int top) {
    const int n = g.size();
    auto mod = [n](int v) { return ((v % n) + n) % n; };
    int bi = bottom - 1, ti = top - 1;
    int left = x[bi] - 1, right = x[ti] - 1;
    int hv = mod(ti - bi), hw = mod(right - left);
    RectangleData r{x, x, std::vector<int>(n, 0), 0, bottom, top, true};
    std::swap(r.to[bi], r.to[ti]);
    for (int k = 0; k < n; ++k) {
        int dv = mod(k - bi), dh = mod(x[k] - 1 - left);
        if (dv > 0 && dv < hv && dh > 0 && dh < hw) r.empty = false;
    }
    auto inside = [&](int row, int col) { return mod(row - 1 - bi) < hv && mod(col - 1 - left) < hw; };
    for (int row = 1; row <= n; ++row)
        if (inside(row, g.o_col(row))) r.o_hits[g.o_col(row) - 1] = 1;
    for (const auto& c : g.xs()) r.x_count += inside(c.row, c.col);
    return r;
}

inline std::vector<RectangleData> empty_rectangles(const GridDiagram& g, const Perm& x) {
    std::vector<RectangleData> out;
    const int n = g.size();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (auto [b, t] : {std::pair{i, j}, std::pair{j, i}}) {
                auto r = rectangle(g, x, b, t);
                if (r.empty) out.push_back(std::move(r));
            }
    return out;
}

inline int alexander_relative(const GridDiagram& g, const Perm& x, const Perm& y) {
    auto m = weights(g);
    Perm cur = x;
    int diff = 0;
    const int n = g.size();
    for (int k = 0; k < n; ++k) {
        if (cur[k] == y[k]) continue;
        int l = static_cast<int>(std::find(cur.begin() + k + 1, cur.end(), y[k]) - cur.begin());
        if (l >= n) throw Error("alexander_relative: arguments are not permutations of the same set");
        auto r = rectangle(g, cur, k + 1, l + 1);
        int o = 0;
        for (int c = 1; c <= n; ++c) o += r.o_hits[c - 1] * m[c];
        diff += r.x_count - o;
        cur = r.to;
    }
    return diff;
}

// ---------------------------------------------------------------------------
// Chain elements over F_2[U_1..U_n]; U_j belongs to the O in column j.

using Monomial = std::vector<int>;

struct Term {
    Monomial mono;
    Perm perm;
    friend auto operator<=>(const Term& a, const Term& b) {
        if (auto c = a.perm <=> b.perm; c != 0) return c;
        return a.mono <=> b.mono;
    }
    friend bool operator==(const Term&, const Term&) = default;
};

class ChainElement {
public:
    ChainElement() = default;
    ChainElement(std::initializer_list<Term> ts) { for (const auto& t : ts) toggle(t); }

    void toggle(const Term& t) {
        auto [it, inserted] = terms_.insert(t);
        if (!inserted) terms_.erase(it);
    }
    ChainElement& operator+=(const ChainElement& o) {
        for (const auto& t : o.terms_) toggle(t);
        return *this;
    }
    friend ChainElement operator+(ChainElement a, const ChainElement& b) { return a += b; }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::set<Term>& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    friend bool operator==(const ChainElement&, const ChainElement&) = default;

private:
    std::set<Term> terms_;
};

inline Term term(const Perm& p, int n) { return {Monomial(n, 0), p}; }

inline int degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

inline int maslov(const GridDiagram& g, const Term& t) { return maslov(g, t.perm) - 2 * degree(t.mono); }

inline int alexander(const GridDiagram& g, const Term& t) {
    auto m = weights(g);
    int a = alexander(g, t.perm);
    for (int c = 1; c <= g.size(); ++c) a -= t.mono[c - 1] * m[c];
    return a;
}

inline bool vanishes_in_hat(const GridDiagram& g, const Monomial& m) {
    for (int c = 1; c <= g.size(); ++c)
        if (m[c - 1] > 0 && g.o_special_in_col(c)) return true;
    return false;
}

enum class Differential { Minus, Hat, Graded };

inline ChainElement apply_differential(const GridDiagram& g, const ChainElement& e, Differential kind) {
    ChainElement out;
    for (const auto& t : e) {
        for (const auto& r : empty_rectangles(g, t.perm)) {
            if (kind == Differential::Graded && r.x_count) continue;
            Monomial m = t.mono;
            for (std::size_t c = 0; c < m.size(); ++c) m[c] += r.o_hits[c];
            if (kind != Differential::Minus && vanishes_in_hat(g, m)) continue;
            out.toggle({std::move(m), r.to});
        }
    }
    return out;
}

inline ChainElement d_minus(const GridDiagram& g, const ChainElement& e) { return apply_differential(g, e, Differential::Minus); }
inline ChainElement d_hat(const GridDiagram& g, const ChainElement& e) { return apply_differential(g, e, Differential::Hat); }
inline ChainElement d_graded(const GridDiagram& g, const ChainElement& e) { return apply_differential(g, e, Differential::Graded); }

} // namespace floergrid
