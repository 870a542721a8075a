#pragma once

#include <string>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace floergrid {

// Two diagrams related by exchanging columns col and col+1, together with the band geometry
// seen from `from`. The curve replacing the vertical line between the two columns runs left of
// it along the arc holding the left column's markings and right of it along the other arc.
struct CommutationPair {
    GridDiagram from;
    GridDiagram to;
    int col = 0;
    ColumnBand band;
};

inline GridDiagram swap_columns(const GridDiagram& g, int i) {
    std::vector<int> ocol = g.o_cols();
    for (auto& c : ocol) c = c == i ? i + 1 : c == i + 1 ? i : c;
    std::vector<Cell> xs = g.xs();
    for (auto& x : xs) x.col = x.col == i ? i + 1 : x.col == i + 1 ? i : x.col;
    return {g.size(), ocol, g.specials(), xs, g.cobordism_mode()};
}

// The same band seen from the diagram with the two columns exchanged: marking heights stay put,
// the arcs trade roles and so do the two crossing points.
inline ColumnBand reflect_band(ColumnBand band) {
    std::swap(band.a, band.b);
    for (auto& m : band.marks) {
        m.side = 1 - m.side;
        m.mark.col = band.col + m.side;
    }
    return band;
}

inline CommutationPair commutation_pair(const GridDiagram& from, const GridDiagram& to) {
    if (from.size() != to.size()) throw NotCommutationPair("diagrams differ in size");
    for (int i = 1; i < from.size(); ++i) {
        if (!(swap_columns(from, i) == to)) continue;
        // Both directions must share one combined picture, so the band is built on a fixed member
        // of the pair. This matters when both arc endpoints sit in shared rows.
        bool from_is_base = serialize(from) <= serialize(to);
        auto res = column_band(from_is_base ? from : to, i);
        if (!res.band) throw NotCommutationPair("columns " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                                " are exchanged but the commutation is illegal: " + res.reason);
        return {from, to, i, from_is_base ? *res.band : reflect_band(*res.band)};
    }
    throw NotCommutationPair("diagrams do not differ by exchanging two adjacent columns");
}

namespace detail {

// Local horizontal positions, scale 4: the line between the band columns at 0, the band's
// markings at -2 and +2, the replacement curve at -3 or +3.
inline int curve_position(const ColumnBand& band, int height) { return band.on_right_arc(height) ? 3 : -3; }

enum class Shape { Pentagon, Hexagon };

// Counts polygons with one corner at the generator's point on the band line and one on another
// vertical line j. The band-side edge follows the line and the replacement curve, switching at
// corner a (pentagons) or at both a and b (hexagons, curve between them). Polygons may extend
// east or west of the band and may wrap around the torus.
inline ChainElement polygon_map(const GridDiagram& g, const ColumnBand& band, const ChainElement& e, Shape shape) {
    // U variables follow their O, which changes column when the map lands in the other diagram.
    const bool relabel = shape == Shape::Pentagon;
    const int n = g.size();
    const int line = band.col + 1;
    auto mod = [n](int v) { return ((v % n) + n) % n; };
    ChainElement out;
    for (const auto& t : e) {
        const Perm& x = t.perm;
        int r1 = static_cast<int>(std::find(x.begin(), x.end(), line) - x.begin()) + 1;
        for (int r2 = 1; r2 <= n; ++r2) {
            if (r2 == r1) continue;
            int j = x[r2 - 1];
            for (bool east : {true, false}) {
                // Vertical extent runs up from lo to hi.
                int lo = 8 * ((east ? r1 : r2) - 1), hi = 8 * ((east ? r2 : r1) - 1);
                auto in_arc = [&](int h) { return band.strictly_between(lo, h, hi); };
                auto up = [&](int h) { return band.up(lo, h); };
                if (!in_arc(band.a)) continue;
                if (shape == Shape::Hexagon) {
                    if (!in_arc(band.b)) continue;
                    if (east != (up(band.a) < up(band.b))) continue;
                }
                auto edge = [&](int h) {
                    bool on_curve;
                    if (shape == Shape::Hexagon) {
                        int first = std::min(up(band.a), up(band.b)), last = std::max(up(band.a), up(band.b));
                        on_curve = up(h) > first && up(h) < last;
                    } else {
                        on_curve = east ? up(h) > up(band.a) : up(h) < up(band.a);
                    }
                    return on_curve ? curve_position(band, h) : 0;
                };
                // Lines strictly inside the horizontal extent, measured from the band line.
                int width = east ? mod(j - line) : mod(line - j);
                auto line_inside = [&](int v) {
                    int d = east ? mod(v - line) : mod(line - v);
                    return d > 0 && d < width;
                };
                bool empty = true;
                for (int r = 1; r <= n && empty; ++r)
                    if (r != r1 && r != r2 && in_arc(8 * (r - 1)) && line_inside(x[r - 1])) empty = false;
                if (!empty) continue;
                Monomial m = t.mono;
                for (int row = 1; row <= n; ++row) {
                    int c = g.o_col(row);
                    if (c == band.col || c == band.col + 1) continue;
                    // Column c lies between lines c and c+1.
                    bool col_inside = east ? line_inside(c) : line_inside(c + 1 > n ? 1 : c + 1);
                    if (col_inside && in_arc(8 * row - 4)) ++m[c - 1];
                }
                for (const auto& bm : band.marks) {
                    if (!bm.mark.is_o() || !in_arc(bm.height)) continue;
                    int pos = bm.side ? 2 : -2;
                    if (east ? pos > edge(bm.height) : pos < edge(bm.height)) ++m[bm.mark.col - 1];
                }
                if (relabel) std::swap(m[band.col - 1], m[band.col]);
                Perm y = x;
                std::swap(y[r1 - 1], y[r2 - 1]);
                out.toggle({std::move(m), std::move(y)});
            }
        }
    }
    return out;
}

} // namespace detail

// Pentagon chain map from CF^-(from) to CF^-(to).
inline ChainElement pentagon_map(const GridDiagram& from, const GridDiagram& to, const ChainElement& e) {
    auto pair = commutation_pair(from, to);
    return detail::polygon_map(from, pair.band, e, detail::Shape::Pentagon);
}

// Hexagon homotopy on CF^-(g) for the commutation taking g to other.
inline ChainElement hexagon_homotopy(const GridDiagram& g, const GridDiagram& other, const ChainElement& e) {
    auto pair = commutation_pair(g, other);
    return detail::polygon_map(g, pair.band, e, detail::Shape::Hexagon);
}

} // namespace floergrid
