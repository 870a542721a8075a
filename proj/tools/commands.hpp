#pragma once

#include <openssl/evp.h>

#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floergrid/cobordism.hpp"
#include "floergrid/complex.hpp"
#include "floergrid/errors.hpp"
#include "floergrid/grid.hpp"
#include "floergrid/homology.hpp"

namespace floergrid::cli {

using Json = nlohmann::ordered_json;

enum Exit : int { kOk = 0, kVerdict = 1, kUsage = 2, kUndetermined = 3 };

struct Flags {
    int window = 4;
    bool certify = false;
    int threads = 0;
    bool override_cap = false;
    bool check_tau = false;
};

struct Outcome {
    Json envelope;
    int exit_code = kOk;
};

inline ComputeOptions compute_options(const Flags& f) {
    ComputeOptions o;
    o.window_slack = f.window;
    o.certify = f.certify;
    o.threads = f.threads;
    o.override_cap = f.override_cap;
    return o;
}

inline std::string sha256_hex(const std::vector<std::string>& parts) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    for (const auto& p : parts) EVP_DigestUpdate(ctx, p.data(), p.size());
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return "sha256:" + os.str();
}

inline Json half(HalfInt h) { return h.str(); }

inline Json grid_json(const GridDiagram& g) {
    Json o = Json::array(), x = Json::array();
    for (int r = 1; r <= g.size(); ++r) o.push_back({{"row", r}, {"col", g.o_col(r)}, {"special", g.o_special_in_row(r)}});
    for (const auto& c : g.xs()) x.push_back({{"row", c.row}, {"col", c.col}});
    return {{"size", g.size()}, {"o", o}, {"x", x}, {"text", serialize(g)}};
}

inline Json table_json(const GradedTable& t) {
    Json rows = Json::array();
    for (const auto& [k, v] : t.dims) rows.push_back({{"maslov", k.first}, {"alexander", k.second}, {"dim", v}});
    return rows;
}

inline Json hat_json(const std::map<int, int>& dims) {
    Json rows = Json::array();
    for (const auto& [i, v] : dims) rows.push_back({{"maslov", i}, {"dim", v}});
    return rows;
}

class Context {
public:
    explicit Context(std::string command) : command_(std::move(command)) {}

    std::string read(const std::filesystem::path& p) {
        auto text = read_file(p);
        inputs_.push_back(text);
        return text;
    }
    void warn(std::string w) { diagnostics_.push_back(std::move(w)); }

    Outcome finish(Json result, int code) const {
        Json env;
        env["command"] = command_;
        env["input_digest"] = sha256_hex(inputs_);
        env["result"] = std::move(result);
        env["diagnostics"] = diagnostics_;
        return {std::move(env), code};
    }

private:
    std::string command_;
    std::vector<std::string> inputs_;
    std::vector<std::string> diagnostics_;
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const WindowError*>(&e)) return kUndetermined;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const IoError*>(&e) ||
        dynamic_cast<const SizeCapExceeded*>(&e))
        return kUsage;
    if (dynamic_cast<const Error*>(&e)) return kVerdict;
    return kUsage;
}

inline std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const SizeCapExceeded*>(&e)) return "size-cap";
    if (dynamic_cast<const WindowError*>(&e)) return "undetermined-in-window";
    if (dynamic_cast<const InvalidGrid*>(&e)) return "invalid-grid";
    if (dynamic_cast<const IllegalMove*>(&e)) return "illegal-move";
    if (dynamic_cast<const ScriptError*>(&e)) return "script";
    return "error";
}

// Runs body; library errors become an envelope carrying the error and its exit status.
template <class F>
Outcome guarded(Context& ctx, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        Json err = {{"kind", error_kind(e)}, {"message", e.what()}};
        if (auto* s = dynamic_cast<const ScriptError*>(&e)) err["step"] = s->step;
        if (auto* p = dynamic_cast<const ParseError*>(&e)) {
            err["line"] = p->line;
            err["col"] = p->col;
        }
        return ctx.finish({{"error", err}}, exit_code_for(e));
    }
}

// ---------------------------------------------------------------------------

inline Outcome cmd_validate(const std::filesystem::path& path) {
    Context ctx("validate");
    return guarded(ctx, [&] {
        auto g = parse_grid_structure(ctx.read(path));
        auto vs = validate(g);
        Json list = Json::array();
        for (const auto& v : vs) list.push_back({{"rule", v.rule}, {"row", v.row}, {"col", v.col}, {"detail", v.detail}});
        Json res = {{"status", vs.empty() ? "valid" : "invalid"}, {"violations", list}};
        return ctx.finish(res, vs.empty() ? kOk : kVerdict);
    });
}

inline Outcome cmd_info(const std::filesystem::path& path, const Flags& f) {
    Context ctx("info");
    return guarded(ctx, [&] {
        auto g = parse_grid(ctx.read(path));
        check_size(g, f.override_cap);
        auto gens = generators(g, true);
        auto w = weights(g);
        Json res;
        res["size"] = g.size();
        res["components"] = components(g).size();
        res["link_grid"] = is_link_grid(g);
        res["tight"] = is_tight(g);
        res["weights"] = std::vector<int>(w.begin() + 1, w.end());
        res["generator_count"] = gens.size();
        auto [mlo, mhi] = std::minmax_element(gens.begin(), gens.end(), [](auto& a, auto& b) { return a.maslov < b.maslov; });
        auto [alo, ahi] = std::minmax_element(gens.begin(), gens.end(), [](auto& a, auto& b) { return a.alex < b.alex; });
        res["maslov_range"] = {mlo->maslov, mhi->maslov};
        res["alexander_range"] = {alo->alex, ahi->alex};
        if (g.size() <= 6) {
            Json rows = Json::array();
            for (const auto& x : gens) rows.push_back({{"perm", x.perm}, {"maslov", x.maslov}, {"alexander", x.alex}});
            res["generators"] = rows;
        }
        return ctx.finish(res, kOk);
    });
}

inline Json tau_json(const TauReport& r) {
    Json res;
    res["tau"] = half(r.tau);
    res["shift"] = half(r.sym.shift);
    res["m_max"] = r.sym.m_max;
    res["m_min"] = r.sym.m_min;
    res["window"] = {r.window.lo, r.window.hi};
    res["slack"] = r.slack;
    res["certified"] = r.certified;
    res["hat_homology"] = hat_json(r.hat_dims);
    res["graded_homology"] = table_json(r.table);
    res["narrowing"] = {{"ok", r.narrowing.ok}, {"floor", r.narrowing.floor},
                        {"hat_totals", r.narrowing.hat_totals}, {"graded_totals", r.narrowing.graded_totals}};
    return res;
}

inline Outcome cmd_tau(const std::filesystem::path& path, const Flags& f) {
    Context ctx("tau");
    return guarded(ctx, [&] {
        auto g = parse_grid(ctx.read(path));
        FloerEngine eng(g, compute_options(f));
        auto r = eng.tau_report();
        if (!r.narrowing.note.empty()) ctx.warn(r.narrowing.note);
        return ctx.finish(tau_json(r), kOk);
    });
}

inline Outcome cmd_moves(const std::filesystem::path& grid_path, const std::filesystem::path& script_path, const Flags& f) {
    Context ctx("moves");
    return guarded(ctx, [&] {
        auto g = parse_grid(ctx.read(grid_path));
        auto moves = parse_moves(ctx.read(script_path));
        GridDiagram cur = g;
        bool isotopy = true;
        for (std::size_t k = 0; k < moves.size(); ++k) {
            isotopy = isotopy && moves[k].is_isotopy();
            try {
                auto res = apply_move(cur, moves[k]);
                for (const auto& w : res.warnings) ctx.warn("step " + std::to_string(k + 1) + ": " + w);
                cur = std::move(res.grid);
            } catch (const IllegalMove& e) {
                throw ScriptError(static_cast<int>(k) + 1, e.what());
            }
        }
        Json res;
        res["steps"] = moves.size();
        res["isotopy_only"] = isotopy;
        res["final"] = grid_json(cur);
        int code = kOk;
        if (f.check_tau) {
            if (!isotopy) {
                ctx.warn("script contains non-isotopy moves; tau equality is not asserted");
            } else {
                auto opt = compute_options(f);
                HalfInt before = tau(g, opt), after = tau(cur, opt);
                res["tau_before"] = half(before);
                res["tau_after"] = half(after);
                res["tau_equal"] = before == after;
                if (before != after) code = kVerdict;
            }
        }
        return ctx.finish(res, code);
    });
}

inline Outcome cmd_cobordism(const std::filesystem::path& script_path, const Flags& f) {
    Context ctx("cobordism");
    return guarded(ctx, [&] {
        auto text = parse_script_text(ctx.read(script_path));
        auto base = script_path.parent_path();
        ctx.read(base / text.initial_path);
        if (text.final_check_path) ctx.read(base / *text.final_check_path);
        auto script = load_script(script_path);
        auto rep = run_script(script, compute_options(f));
        for (const auto& w : rep.warnings) ctx.warn(w);
        if (!rep.normal_form) ctx.warn("script is not in births, saddles, deaths order; counts still apply");
        Json res;
        res["l1"] = rep.l1;
        res["l2"] = rep.l2;
        res["counts"] = {{"births", rep.counts.births}, {"deaths", rep.counts.deaths},
                         {"x_saddles", rep.counts.x_saddles}, {"o_saddles", rep.counts.o_saddles}};
        res["genus"] = rep.genus;
        res["a_prime_shift"] = half(rep.a_prime_shift);
        auto end = [](const EndpointTau& e) {
            return Json{{"tau", half(e.tau)}, {"tau_prime", half(e.tau_prime)}, {"components", e.components},
                        {"tau_equals_tau_prime_plus_half_l_minus_1", e.lemma_holds}};
        };
        res["initial"] = end(rep.end1);
        res["final"] = end(rep.end2);
        res["bound"] = {{"lower", half(rep.lower)}, {"difference", half(rep.tau1 - rep.tau2)}, {"upper", half(rep.upper)}};
        res["bound_satisfied"] = rep.bound_satisfied;
        res["final_grid"] = grid_json(rep.final_grid);
        return ctx.finish(res, rep.bound_satisfied ? kOk : kVerdict);
    });
}

inline Outcome cmd_slice_check(const std::filesystem::path& path, const Flags& f) {
    Context ctx("slice-check");
    return guarded(ctx, [&] {
        auto g = parse_grid(ctx.read(path));
        if (!is_link_grid(g)) throw InvalidGrid("slice check needs a link grid");
        if (!is_tight(g)) throw InvalidGrid("slice check needs exactly one special O on each component");
        HalfInt t = tau(g, compute_options(f));
        int l = static_cast<int>(components(g).size());
        auto v = slice_obstruction(t, l);
        Json res = {{"tau", half(t)}, {"components", l}, {"verdict", v.obstructed ? "obstructed" : "inconclusive"},
                    {"branch", v.branch}};
        return ctx.finish(res, v.obstructed ? kVerdict : kOk);
    });
}

// ---------------------------------------------------------------------------
// Table rendering

inline void render_value(std::ostream& os, const Json& v, int indent);

inline void render_object(std::ostream& os, const Json& obj, int indent) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        os << std::string(indent, ' ') << it.key() << ":";
        const auto& v = it.value();
        if (v.is_object() || (v.is_array() && !v.empty() && v.front().is_object())) {
            os << "\n";
            render_value(os, v, indent + 2);
        } else if (v.is_string() && v.get<std::string>().find('\n') != std::string::npos) {
            os << "\n";
            std::istringstream lines(v.get<std::string>());
            for (std::string line; std::getline(lines, line);) os << std::string(indent + 2, ' ') << line << "\n";
        } else {
            os << " " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

inline void render_value(std::ostream& os, const Json& v, int indent) {
    if (v.is_object()) {
        render_object(os, v, indent);
        return;
    }
    // Arrays of flat objects print as aligned rows.
    std::vector<std::string> keys;
    for (auto it = v.front().begin(); it != v.front().end(); ++it) keys.push_back(it.key());
    std::vector<std::vector<std::string>> cells;
    cells.push_back(keys);
    for (const auto& row : v) {
        std::vector<std::string> r;
        for (const auto& k : keys) {
            const auto& c = row.contains(k) ? row.at(k) : Json();
            r.push_back(c.is_string() ? c.get<std::string>() : c.dump());
        }
        cells.push_back(std::move(r));
    }
    std::vector<std::size_t> width(keys.size(), 0);
    for (const auto& r : cells)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    for (const auto& r : cells) {
        os << std::string(indent, ' ');
        for (std::size_t i = 0; i < r.size(); ++i) os << std::left << std::setw(static_cast<int>(width[i]) + 2) << r[i];
        os << "\n";
    }
}

inline std::string render_table(const Json& env) {
    std::ostringstream os;
    os << "command: " << env["command"].get<std::string>() << "\n";
    os << "input_digest: " << env["input_digest"].get<std::string>() << "\n";
    os << "result:\n";
    render_value(os, env["result"], 2);
    for (const auto& d : env["diagnostics"]) os << "warning: " << d.get<std::string>() << "\n";
    return os.str();
}

} // namespace floergrid::cli
