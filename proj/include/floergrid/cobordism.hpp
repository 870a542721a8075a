#pragma once

#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "half_int.hpp"
#include "homology.hpp"

namespace floergrid {

// ---------------------------------------------------------------------------
// Link-normalized Alexander grading

inline void require_link_grid(const GridDiagram& g) {
    if (!is_link_grid(g)) throw InvalidGrid("not a link grid: some row or column holds more than one X");
}

// Twice the unordered count of pairs in s with one point strictly north-east of the other.
inline std::int64_t ne_pairs_twice(const PointSet& s) { return j_twice(s, s) / 2; }

inline HalfInt alexander_prime(const GridDiagram& g, const Perm& x) {
    require_link_grid(g);
    auto pts = lattice_points(x);
    auto xs = x_points(g), os = o_points(g);
    std::int64_t twice = j_twice(pts, xs) - j_twice(pts, os) - ne_pairs_twice(xs) + ne_pairs_twice(os) - (g.size() - 1);
    return HalfInt::from_twice(twice);
}

inline Filtration alexander_prime_filtration(const FloerEngine& eng) {
    const auto& d = eng.data();
    Filtration f;
    for (const auto& p : d.perms) f.twice_by_perm.push_back(alexander_prime(d.grid, p).twice());
    f.twice_drop_by_col.assign(d.n + 1, 2);
    return f;
}

struct TauPrimeReport {
    HalfInt tau_prime;
    Window window;
    bool certified = false;
};

inline TauPrimeReport tau_prime_report(const GridDiagram& g, const ComputeOptions& opt = {}) {
    require_link_grid(g);
    if (!is_tight(g)) throw InvalidGrid("tau' needs exactly one special O on each component");
    FloerEngine eng(g, opt);
    auto f = alexander_prime_filtration(eng);
    auto at = [&](int slack) {
        Window w = eng.default_window(slack);
        auto lvl = eng.min_surviving_level(w, f);
        if (!lvl)
            throw WindowError("tau' undetermined: hat homology vanishes in window [" + std::to_string(w.lo) + ", " +
                              std::to_string(w.hi) + "]");
        return std::pair{HalfInt::from_twice(*lvl), w};
    };
    auto [value, w] = at(opt.window_slack);
    TauPrimeReport r{value, w, false};
    if (opt.certify) {
        if (at(opt.window_slack + 2).first != value)
            throw WindowError("window instability: tau' changed when the window grew");
        r.certified = true;
    }
    return r;
}

inline HalfInt tau_prime(const GridDiagram& g, const ComputeOptions& opt = {}) { return tau_prime_report(g, opt).tau_prime; }

// ---------------------------------------------------------------------------
// Slice obstruction

struct SliceVerdict {
    bool obstructed = false;
    std::string branch;  // "tau > 0", "tau <= -l" or "none"
};

inline SliceVerdict slice_obstruction(HalfInt tau_value, int l) {
    if (tau_value > HalfInt(0)) return {true, "tau > 0"};
    if (tau_value <= HalfInt(-l)) return {true, "tau <= -l"};
    return {false, "none"};
}

// ---------------------------------------------------------------------------
// Cobordism scripts

struct CobordismScript {
    GridDiagram initial;
    std::optional<GridDiagram> final_check;
    std::vector<GridMove> moves;
    std::vector<int> lines;  // source line of each move, 0 if built in code
};

struct ScriptText {
    std::string initial_path;
    std::optional<std::string> final_check_path;
    std::vector<GridMove> moves;
    std::vector<int> lines;
};

inline ScriptText parse_script_text(const std::string& text) {
    ScriptText s;
    int lineno = 0;
    for (const auto& line : detail::split_lines(text)) {
        ++lineno;
        auto tok = detail::tokenize(line);
        if (tok.empty()) continue;
        const auto& head = tok[0].text;
        if (head == "initial" || head == "final-check") {
            if (tok.size() != 2) throw ParseError(lineno, tok[0].col, "'" + head + "' takes one path");
            if (head == "initial") {
                if (!s.initial_path.empty()) throw ParseError(lineno, tok[0].col, "duplicate 'initial' line");
                s.initial_path = tok[1].text;
            } else {
                if (s.final_check_path) throw ParseError(lineno, tok[0].col, "duplicate 'final-check' line");
                s.final_check_path = tok[1].text;
            }
            continue;
        }
        s.moves.push_back(parse_move(line, lineno));
        s.lines.push_back(lineno);
    }
    if (s.initial_path.empty()) throw ParseError(lineno ? lineno : 1, 1, "script has no 'initial <path>' line");
    return s;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Grid paths inside a script resolve against the script's directory.
inline CobordismScript load_script(const std::filesystem::path& path) {
    auto text = parse_script_text(read_file(path));
    auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path q(p);
        return q.is_absolute() ? q : base / q;
    };
    CobordismScript s{parse_grid(read_file(resolve(text.initial_path))), std::nullopt, text.moves, text.lines};
    if (text.final_check_path) s.final_check = parse_grid(read_file(resolve(*text.final_check_path)));
    return s;
}

struct MoveCounts {
    int births = 0, deaths = 0, x_saddles = 0, o_saddles = 0;
    int saddles() const { return x_saddles + o_saddles; }
};

struct EndpointTau {
    HalfInt tau;
    HalfInt tau_prime;
    int components = 0;
    bool lemma_holds = false;  // tau = tau' + (l - 1)/2
};

struct CobordismReport {
    int l1 = 0, l2 = 0;
    MoveCounts counts;
    int genus = 0;
    HalfInt a_prime_shift;
    HalfInt tau1, tau2;
    EndpointTau end1, end2;
    HalfInt lower, upper;  // 1 - g - l1 and g + l2 - 1
    bool bound_satisfied = false;
    bool normal_form = true;
    GridDiagram final_grid;
    std::vector<std::string> warnings;
};

inline EndpointTau endpoint_tau(const GridDiagram& g, const ComputeOptions& opt) {
    EndpointTau e;
    e.tau = tau(g, opt);
    e.tau_prime = tau_prime(g, opt);
    e.components = static_cast<int>(components(g).size());
    e.lemma_holds = e.tau == e.tau_prime + HalfInt::from_twice(e.components - 1);
    return e;
}

inline CobordismReport run_script(const CobordismScript& script, const ComputeOptions& opt = {}) {
    CobordismReport rep;
    auto check_endpoint = [](const GridDiagram& g, const char* which) {
        if (!is_link_grid(g)) throw ScriptError(0, std::string(which) + " diagram is not a link grid");
        if (!is_tight(g))
            throw ScriptError(0, std::string(which) + " diagram is not tight: every component needs exactly one special O");
    };
    check_endpoint(script.initial, "initial");

    // Normal form: births, then saddles, then deaths.
    int phase = 0;
    GridDiagram g = script.initial;
    for (std::size_t k = 0; k < script.moves.size(); ++k) {
        const auto& mv = script.moves[k];
        int step = static_cast<int>(k) + 1;
        int move_phase = phase;
        switch (mv.kind) {
        case MoveKind::Birth: ++rep.counts.births; move_phase = 0; break;
        case MoveKind::XSaddle: ++rep.counts.x_saddles; move_phase = 1; break;
        case MoveKind::OSaddle: ++rep.counts.o_saddles; move_phase = 1; break;
        case MoveKind::Death: ++rep.counts.deaths; move_phase = 2; break;
        default: break;
        }
        if (move_phase < phase && rep.normal_form) {
            rep.normal_form = false;
            rep.warnings.push_back("step " + std::to_string(step) + ": '" + to_string(mv) +
                                   "' breaks the births, saddles, deaths order");
        }
        phase = std::max(phase, move_phase);
        try {
            auto res = apply_move(g, mv);
            for (const auto& w : res.warnings) rep.warnings.push_back("step " + std::to_string(step) + ": " + w);
            g = std::move(res.grid);
        } catch (const IllegalMove& e) {
            int line = k < script.lines.size() ? script.lines[k] : 0;
            throw ScriptError(step, std::string(e.what()) + (line ? " (line " + std::to_string(line) + ")" : ""));
        }
    }
    check_endpoint(g, "final");
    rep.final_grid = g.with_cobordism_mode(false);
    if (script.final_check && serialize(*script.final_check) != serialize(rep.final_grid))
        throw ScriptError(static_cast<int>(script.moves.size()), "final diagram differs from the final-check diagram");

    rep.l1 = static_cast<int>(components(script.initial).size());
    rep.l2 = static_cast<int>(components(rep.final_grid).size());
    const auto& c = rep.counts;
    int twice_genus = c.saddles() - c.births - c.deaths + 2 - rep.l1 - rep.l2;
    if (twice_genus % 2 != 0 || twice_genus < 0)
        throw ScriptError(0, "genus formula gives " + HalfInt::from_twice(twice_genus).str() +
                                 "; the cobordism is not connected or the move counts are inconsistent");
    rep.genus = twice_genus / 2;
    rep.a_prime_shift = HalfInt::from_twice(-c.births + c.x_saddles - c.o_saddles + c.deaths);
    if (c.o_saddles != rep.l2 + c.deaths - rep.l1)
        rep.warnings.push_back("O-saddle count " + std::to_string(c.o_saddles) + " differs from l2 + d - l1 = " +
                               std::to_string(rep.l2 + c.deaths - rep.l1) + "; the net A' shift identity is not checked");
    else if (rep.a_prime_shift != HalfInt::from_twice(c.saddles() - c.births - c.deaths) + HalfInt(rep.l1 - rep.l2))
        throw Error("internal: net A' shift disagrees with its closed form");

    auto first = std::async(std::launch::async, [&] { return endpoint_tau(script.initial, opt); });
    rep.end2 = endpoint_tau(rep.final_grid, opt);
    rep.end1 = first.get();
    rep.tau1 = rep.end1.tau;
    rep.tau2 = rep.end2.tau;
    rep.lower = HalfInt(1 - rep.genus - rep.l1);
    rep.upper = HalfInt(rep.genus + rep.l2 - 1);
    HalfInt diff = rep.tau1 - rep.tau2;
    rep.bound_satisfied = rep.lower <= diff && diff <= rep.upper;
    return rep;
}

} // namespace floergrid
