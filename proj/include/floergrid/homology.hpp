#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "f2.hpp"
#include "grid.hpp"
#include "half_int.hpp"

namespace floergrid {

struct ComputeOptions {
    int window_slack = 4;
    bool certify = true;
    int threads = 0;  // 0 = hardware concurrency
    bool override_cap = false;
};

struct Window {
    int lo = 0;
    int hi = -1;
    bool empty() const { return hi < lo; }
    friend bool operator==(const Window&, const Window&) = default;
};

// ---------------------------------------------------------------------------
// Exponent vectors over the live standard O's.

inline constexpr int kMaxVars = 24;
using Expo = std::array<std::uint8_t, kMaxVars>;

class MonomialTable {
public:
    MonomialTable() {
        for (int a = 0; a < kBinom; ++a) {
            binom_[a][0] = 1;
            for (int b = 1; b <= a; ++b) binom_[a][b] = binom_[a - 1][b - 1] + (b < a ? binom_[a - 1][b] : 0);
        }
    }

    std::uint64_t count(int d, int t) const {
        if (d < 0) return 0;
        if (t == 0) return d == 0;
        return binom(d + t - 1, t - 1);
    }

    // Position of e among degree-d exponent vectors in t variables, in ascending lex order.
    std::uint64_t rank(const Expo& e, int d, int t) const {
        std::uint64_t r = 0;
        int rem = d;
        for (int j = 0; j + 1 < t; ++j) {
            for (int v = 0; v < e[j]; ++v) r += count(rem - v, t - j - 1);
            rem -= e[j];
        }
        return r;
    }

    const std::vector<Expo>& list(int d, int t) {
        std::lock_guard lock(mu_);
        auto key = std::pair{d, t};
        auto it = lists_.find(key);
        if (it != lists_.end()) return it->second;
        std::vector<Expo> out;
        Expo cur{};
        std::function<void(int, int)> rec = [&](int j, int rem) {
            if (j == t - 1) {
                cur[j] = static_cast<std::uint8_t>(rem);
                out.push_back(cur);
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                cur[j] = static_cast<std::uint8_t>(v);
                rec(j + 1, rem - v);
            }
            cur[j] = 0;
        };
        if (t == 0) {
            if (d == 0) out.push_back(cur);
        } else {
            rec(0, d);
        }
        return lists_.emplace(key, std::move(out)).first->second;
    }

private:
    static constexpr int kBinom = 160;
    std::uint64_t binom(int a, int b) const {
        if (a >= kBinom) throw WindowError("monomial degree too large for this window");
        return binom_[a][b];
    }
    std::array<std::array<std::uint64_t, kBinom>, kBinom> binom_{};
    std::mutex mu_;
    std::map<std::pair<int, int>, std::vector<Expo>> lists_;
};

// ---------------------------------------------------------------------------
// Per-diagram data shared by every grading.

struct RectEdge {
    std::uint32_t target;
    std::uint32_t o_mask;  // bit c-1 for the O in column c
    std::uint16_t x_count;
};

struct ComplexData {
    GridDiagram grid;
    int n = 0;
    std::vector<Perm> perms;
    std::vector<int> maslov, alex;
    std::vector<int> weight;          // by column, index 0 unused
    std::uint32_t special_mask = 0;
    std::vector<int> vars;            // columns of the standard O's, ascending
    std::vector<int> var_of_col;      // -1 for special O's
    std::vector<std::vector<RectEdge>> rects;
    int min_m = 0, max_m = 0;

    ComplexData(const GridDiagram& g, bool override_cap) : grid(g), n(g.size()) {
        check_size(g, override_cap);
        weight = weights(g);
        var_of_col.assign(n + 1, -1);
        for (int c = 1; c <= n; ++c) {
            if (g.o_special_in_col(c)) {
                special_mask |= 1u << (c - 1);
            } else {
                var_of_col[c] = static_cast<int>(vars.size());
                vars.push_back(c);
            }
        }
        if (static_cast<int>(vars.size()) > kMaxVars) throw SizeCapExceeded("too many standard O's");
        perms = all_perms(n);
        maslov.resize(perms.size());
        alex.resize(perms.size());
        rects.resize(perms.size());
        for (std::size_t p = 0; p < perms.size(); ++p) {
            maslov[p] = floergrid::maslov(g, perms[p]);
            alex[p] = alexander(g, perms[p]);
            for (const auto& r : empty_rectangles(g, perms[p])) {
                std::uint32_t mask = 0;
                for (int c = 0; c < n; ++c) if (r.o_hits[c]) mask |= 1u << c;
                rects[p].push_back({perm_rank(r.to), mask, static_cast<std::uint16_t>(r.x_count)});
            }
        }
        auto [lo, hi] = std::minmax_element(maslov.begin(), maslov.end());
        min_m = *lo;
        max_m = *hi;
    }

    int levels() const { return static_cast<int>(vars.size()); }
};

// Basis of the hat complex in one Maslov grading, with the first `level` standard variables
// alive and the rest set to zero. Entries are ordered by generator, then exponent vector.
struct Slice {
    int grading = 0;
    int level = 0;
    std::vector<std::uint64_t> offset;  // size perms + 1
    std::uint64_t dim() const { return offset.back(); }
};

struct Boundary {
    // CSR lists of target indices (odd multiplicity) per source entry.
    std::vector<std::uint32_t> full_ptr, full_idx;
    std::vector<std::uint32_t> gr_ptr, gr_idx;
};

struct GradingRanks {
    std::size_t full = 0;
    std::map<int, std::size_t> graded;  // by Alexander grading of the source block
};

// Values of a filtration, doubled: per generator, and the drop per unit exponent of each O.
struct Filtration {
    std::vector<std::int64_t> twice_by_perm;
    std::vector<std::int64_t> twice_drop_by_col;  // index 0 unused
};

struct GradedTable {
    std::map<std::pair<int, int>, int> dims;  // (maslov, alexander) -> dim
    int m_max = 0, m_min = 0;
    Window window;
    int total() const {
        int t = 0;
        for (const auto& [k, v] : dims) t += v;
        return t;
    }
    friend bool operator==(const GradedTable&, const GradedTable&) = default;
};

struct Symmetrization {
    HalfInt shift;
    int m_max = 0, m_min = 0;
};

struct NarrowingInfo {
    bool ok = true;
    int floor = 0;                        // lowest grading carrying homology
    std::vector<int> hat_totals;          // total dimension per level
    std::vector<int> graded_totals;
    std::string note;
};

struct TauReport {
    HalfInt tau;
    Symmetrization sym;
    std::map<int, int> hat_dims;
    GradedTable table;
    Window window;
    int slack = 0;
    bool certified = false;
    NarrowingInfo narrowing;
};

class FloerEngine {
public:
    explicit FloerEngine(const GridDiagram& g, ComputeOptions opt = {})
        : opt_(opt), data_(std::make_shared<ComplexData>(g, opt.override_cap)) {}

    const ComplexData& data() const { return *data_; }
    const ComputeOptions& options() const { return opt_; }
    int levels() const { return data_->levels(); }

    Filtration alexander_filtration() const {
        Filtration f;
        for (int a : data_->alex) f.twice_by_perm.push_back(2 * static_cast<std::int64_t>(a));
        f.twice_drop_by_col.assign(data_->n + 1, 0);
        for (int c = 1; c <= data_->n; ++c) f.twice_drop_by_col[c] = 2 * data_->weight[c];
        return f;
    }

    // -- bases ---------------------------------------------------------------

    const Slice& slice(int i, int t) {
        std::lock_guard lock(mu_);
        return slice_locked(i, t);
    }

    // Enumerates (perm index, exponent vector, global index) for every entry of the slice.
    template <class F>
    void for_each_entry(const Slice& s, F&& f) {
        const auto& d = *data_;
        for (std::size_t p = 0; p < d.perms.size(); ++p) {
            std::uint64_t cnt = s.offset[p + 1] - s.offset[p];
            if (!cnt) continue;
            int deg = (d.maslov[p] - s.grading) / 2;
            const auto& monos = monos_.list(deg, s.level);
            for (std::uint64_t k = 0; k < cnt; ++k) f(p, monos[k], s.offset[p] + k);
        }
    }

    std::int64_t entry_filtration(const Filtration& f, std::size_t p, const Expo& e, int t) const {
        std::int64_t v = f.twice_by_perm[p];
        for (int j = 0; j < t; ++j) v -= e[j] * f.twice_drop_by_col[data_->vars[j]];
        return v;
    }

    int entry_alex(std::size_t p, const Expo& e, int t) const {
        int a = data_->alex[p];
        for (int j = 0; j < t; ++j) a -= e[j] * data_->weight[data_->vars[j]];
        return a;
    }

    Monomial to_monomial(const Expo& e, int t) const {
        Monomial m(data_->n, 0);
        for (int j = 0; j < t; ++j) m[data_->vars[j] - 1] = e[j];
        return m;
    }

    // -- differentials --------------------------------------------------------

    // D_i : C_i -> C_{i-1} at level t.
    const Boundary& boundary(int i, int t) {
        {
            std::lock_guard lock(mu_);
            auto it = boundaries_.find({i, t});
            if (it != boundaries_.end()) return *it->second;
        }
        auto b = std::make_unique<Boundary>(compute_boundary(i, t));
        std::lock_guard lock(mu_);
        return *boundaries_.try_emplace({i, t}, std::move(b)).first->second;
    }

    const GradingRanks& ranks(int i, int t) {
        {
            std::lock_guard lock(mu_);
            auto it = ranks_.find({i, t});
            if (it != ranks_.end()) return it->second;
        }
        auto r = compute_ranks(i, t);
        std::lock_guard lock(mu_);
        return ranks_.try_emplace({i, t}, std::move(r)).first->second;
    }

    // Computes ranks for all gradings in [lo, hi] at level t, in parallel.
    void prepare(int lo, int hi, int t) {
        for (int i = lo - 1; i <= hi; ++i) slice(i, t);
        std::vector<int> todo;
        for (int i = lo; i <= hi; ++i) todo.push_back(i);
        int workers = opt_.threads > 0 ? opt_.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        workers = std::min<int>(workers, static_cast<int>(todo.size()));
        if (workers <= 1) {
            for (int i : todo) ranks(i, t);
            return;
        }
        std::vector<std::future<void>> jobs;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t k; (k = next++) < todo.size();) ranks(todo[k], t);
            }));
        for (auto& j : jobs) j.get();
    }

    std::map<int, int> hat_dims(int lo, int hi, int t) {
        prepare(lo, hi + 1, t);
        std::map<int, int> out;
        for (int i = lo; i <= hi; ++i) {
            auto d = static_cast<int>(slice(i, t).dim() - ranks(i, t).full - ranks(i + 1, t).full);
            if (d) out[i] = d;
        }
        return out;
    }

    std::map<std::pair<int, int>, int> graded_dims(int lo, int hi, int t) {
        prepare(lo, hi + 1, t);
        std::map<std::pair<int, int>, int> out;
        for (int i = lo; i <= hi; ++i) {
            for (const auto& [m, size] : block_sizes(i, t)) {
                auto rank_at = [&](int g) {
                    const auto& gr = ranks(g, t).graded;
                    auto it = gr.find(m);
                    return it == gr.end() ? std::size_t{0} : it->second;
                };
                int d = static_cast<int>(size - rank_at(i) - rank_at(i + 1));
                if (d) out[{i, m}] = d;
            }
        }
        return out;
    }

    // -- narrowing ------------------------------------------------------------

    // Finds the lowest Maslov grading carrying hat or associated graded homology by adding one
    // standard variable at a time. Each variable acts null-homotopically, so supports can only
    // shrink and total dimensions must halve; a failed halving check falls back to a wide floor.
    const NarrowingInfo& narrowing() {
        if (narrow_) return *narrow_;
        NarrowingInfo info;
        const auto& d = *data_;
        auto hat = hat_dims(d.min_m, d.max_m, 0);
        auto gr = graded_dims(d.min_m, d.max_m, 0);
        auto total = [](const auto& m) {
            int s = 0;
            for (const auto& [k, v] : m) s += v;
            return s;
        };
        info.hat_totals.push_back(total(hat));
        info.graded_totals.push_back(total(gr));
        for (int t = 1; t <= levels() && info.ok; ++t) {
            std::map<int, int> nh;
            for (const auto& [i, v] : hat) {
                auto one = hat_dims(i, i, t);
                nh.insert(one.begin(), one.end());
            }
            std::map<std::pair<int, int>, int> ng;
            std::set<int> gr_gradings;
            for (const auto& [k, v] : gr) gr_gradings.insert(k.first);
            for (int i : gr_gradings) {
                auto one = graded_dims(i, i, t);
                for (const auto& [k, v] : one)
                    if (gr.count(k)) ng[k] = v;
                    else info.ok = false;
            }
            info.hat_totals.push_back(total(nh));
            info.graded_totals.push_back(total(ng));
            if (2 * total(nh) != total(hat) || 2 * total(ng) != total(gr)) info.ok = false;
            hat = std::move(nh);
            gr = std::move(ng);
        }
        if (info.ok && !hat.empty()) {
            info.floor = hat.begin()->first;
            if (!gr.empty()) info.floor = std::min(info.floor, gr.begin()->first.first);
        } else {
            info.ok = false;
            info.floor = d.min_m - 2 * d.n;
            info.note = "support narrowing failed its halving check; using the wide window floor";
        }
        narrow_ = info;
        return *narrow_;
    }

    Window default_window(int slack) {
        const auto& nr = narrowing();
        int floor = nr.ok ? nr.floor : nr.floor - 2 * slack;
        return {nr.ok ? floor - slack : floor, data_->max_m};
    }

    // -- homology over a window (all standard variables alive) ------------------

    // Lowest grading of w that is computed explicitly. Below a successful narrowing floor every
    // level injects into the one beneath it, so homology there is zero without computation.
    int explicit_floor(Window w) {
        const auto& nr = narrowing();
        return nr.ok ? std::max(w.lo, nr.floor) : w.lo;
    }

    std::map<int, int> hat_homology(Window w) {
        if (w.empty()) throw WindowError("empty Maslov window");
        int lo = explicit_floor(w);
        return lo > w.hi ? std::map<int, int>{} : hat_dims(lo, w.hi, levels());
    }

    GradedTable graded_homology(Window w) {
        if (w.empty()) throw WindowError("empty Maslov window");
        GradedTable t;
        t.window = w;
        if (int lo = explicit_floor(w); lo <= w.hi) t.dims = graded_dims(lo, w.hi, levels());
        if (t.dims.empty()) throw WindowError("associated graded homology vanishes in the window");
        t.m_max = t.m_min = t.dims.begin()->first.second;
        for (const auto& [k, v] : t.dims) {
            t.m_max = std::max(t.m_max, k.second);
            t.m_min = std::min(t.m_min, k.second);
        }
        return t;
    }

    static Symmetrization symmetrize(const GradedTable& t) {
        return {HalfInt::from_twice(-(t.m_max + t.m_min)), t.m_max, t.m_min};
    }

    // Smallest filtration level (doubled, unshifted) at which a cycle survives to homology, or
    // nothing if hat homology vanishes in the window. Cycles are produced in a basis adapted to
    // the filtration by reducing boundary images in ascending filtration order.
    std::optional<std::int64_t> min_surviving_level(Window w, const Filtration& f) {
        const int t = levels();
        auto hat = hat_homology(w);
        std::optional<std::int64_t> best;
        for (const auto& [i, dim] : hat) {
            if (dim <= 0) continue;
            const auto& s = slice(i, t);
            const auto& s_lo = slice(i - 1, t);
            const auto& d_i = boundary(i, t);
            const auto& d_up = boundary(i + 1, t);
            const auto& s_up = slice(i + 1, t);
            std::size_t n_src = s.dim();
            std::vector<std::int64_t> level(n_src);
            for_each_entry(s, [&](std::size_t p, const Expo& e, std::uint64_t k) { level[k] = entry_filtration(f, p, e, t); });
            std::vector<std::uint32_t> order(n_src);
            std::iota(order.begin(), order.end(), 0u);
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return level[a] < level[b]; });
            std::vector<std::uint32_t> pos(n_src);
            for (std::size_t k = 0; k < n_src; ++k) pos[order[k]] = static_cast<std::uint32_t>(k);

            Echelon bnd(n_src);
            for (std::size_t j = 0; j < s_up.dim(); ++j) {
                BitVec v(n_src);
                for (auto q = d_up.full_ptr[j]; q < d_up.full_ptr[j + 1]; ++q) v.flip(pos[d_up.full_idx[q]]);
                bnd.insert(std::move(v));
            }
            TrackedEchelon cyc(s_lo.dim(), n_src);
            for (std::size_t k = 0; k < n_src; ++k) {
                if (best && level[order[k]] >= *best) break;
                std::uint32_t src = order[k];
                BitVec img(s_lo.dim());
                for (auto q = d_i.full_ptr[src]; q < d_i.full_ptr[src + 1]; ++q) img.flip(d_i.full_idx[q]);
                auto z = cyc.feed(k, std::move(img));
                if (z && !bnd.contains(*z)) {
                    best = level[order[k]];
                    break;
                }
            }
        }
        return best;
    }

    // dim((Z_m + B) / B) > 0 in some grading, with Z_m the cycles of filtration level <= m,
    // evaluated with explicit subspace operations.
    bool iota_nontrivial(Window w, const Filtration& f, std::int64_t twice_m) {
        const int t = levels();
        for (const auto& [i, dim] : hat_homology(w)) {
            const auto& s = slice(i, t);
            const auto& s_lo = slice(i - 1, t);
            const auto& s_up = slice(i + 1, t);
            const auto& d_i = boundary(i, t);
            const auto& d_up = boundary(i + 1, t);
            std::vector<std::uint32_t> sub;
            for_each_entry(s, [&](std::size_t p, const Expo& e, std::uint64_t k) {
                if (entry_filtration(f, p, e, t) <= twice_m) sub.push_back(static_cast<std::uint32_t>(k));
            });
            BitMatrix restricted(s_lo.dim(), sub.size());
            for (std::size_t c = 0; c < sub.size(); ++c)
                for (auto q = d_i.full_ptr[sub[c]]; q < d_i.full_ptr[sub[c] + 1]; ++q) restricted.flip(d_i.full_idx[q], c);
            std::vector<BitVec> cycles;
            auto kernel = kernel_basis(restricted);
            for (const auto& z : kernel.basis()) {
                BitVec v(s.dim());
                for (auto b = z.find_first(); b != BitVec::npos; b = z.find_next(b + 1)) v.set(sub[b]);
                cycles.push_back(std::move(v));
            }
            std::vector<BitVec> images;
            for (std::size_t j = 0; j < s_up.dim(); ++j) {
                BitVec v(s.dim());
                for (auto q = d_up.full_ptr[j]; q < d_up.full_ptr[j + 1]; ++q) v.flip(d_up.full_idx[q]);
                images.push_back(std::move(v));
            }
            if (relative_rank(Subspace::span(s.dim(), cycles), Subspace::span(s.dim(), images)) > 0) return true;
        }
        return false;
    }

    // Symmetrized tau on the given window.
    TauReport tau_on(Window w) {
        TauReport r;
        r.window = w;
        r.hat_dims = hat_homology(w);
        r.table = graded_homology(w);
        r.sym = symmetrize(r.table);
        auto lvl = min_surviving_level(w, alexander_filtration());
        if (!lvl)
            throw WindowError("tau undetermined: hat homology vanishes in window [" + std::to_string(w.lo) + ", " +
                              std::to_string(w.hi) + "]");
        r.tau = HalfInt::from_twice(*lvl) + r.sym.shift;
        return r;
    }

    TauReport tau_report() {
        int W = opt_.window_slack;
        auto r = tau_on(default_window(W));
        r.slack = W;
        r.narrowing = narrowing();
        if (opt_.certify) {
            auto wide = tau_on(default_window(W + 2));
            bool same = wide.tau == r.tau && wide.hat_dims == r.hat_dims && wide.table.dims == r.table.dims;
            if (!same)
                throw WindowError("window instability: results changed between slack " + std::to_string(W) + " and " +
                                  std::to_string(W + 2));
            r.certified = true;
        }
        return r;
    }

private:
    const Slice& slice_locked(int i, int t) {
        auto it = slices_.find({i, t});
        if (it != slices_.end()) return it->second;
        const auto& d = *data_;
        Slice s;
        s.grading = i;
        s.level = t;
        s.offset.assign(d.perms.size() + 1, 0);
        for (std::size_t p = 0; p < d.perms.size(); ++p) {
            int gap = d.maslov[p] - i;
            std::uint64_t cnt = (gap >= 0 && gap % 2 == 0) ? monos_.count(gap / 2, t) : 0;
            s.offset[p + 1] = s.offset[p] + cnt;
        }
        if (s.dim() > std::numeric_limits<std::uint32_t>::max()) throw WindowError("chain group too large");
        return slices_.emplace(std::pair{i, t}, std::move(s)).first->second;
    }

    std::map<int, std::size_t> block_sizes(int i, int t) {
        std::map<int, std::size_t> out;
        for_each_entry(slice(i, t), [&](std::size_t p, const Expo& e, std::uint64_t) { ++out[entry_alex(p, e, t)]; });
        return out;
    }

    Boundary compute_boundary(int i, int t) {
        const auto& d = *data_;
        const Slice& src = slice(i, t);
        const Slice& dst = slice(i - 1, t);
        std::uint32_t live = 0;
        for (int j = 0; j < t; ++j) live |= 1u << (d.vars[j] - 1);
        std::uint32_t dead = ~live;
        Boundary b;
        b.full_ptr.push_back(0);
        b.gr_ptr.push_back(0);
        std::vector<std::uint32_t> full, gr;
        auto flush = [](std::vector<std::uint32_t>& v, std::vector<std::uint32_t>& out) {
            std::sort(v.begin(), v.end());
            for (std::size_t k = 0; k < v.size();) {
                std::size_t e = k;
                while (e < v.size() && v[e] == v[k]) ++e;
                if ((e - k) & 1) out.push_back(v[k]);
                k = e;
            }
            v.clear();
        };
        int deg_src = 0;
        for_each_entry(src, [&](std::size_t p, const Expo& e, std::uint64_t) {
            deg_src = (d.maslov[p] - i) / 2;
            for (const auto& r : d.rects[p]) {
                if (r.o_mask & dead) continue;
                Expo f = e;
                int deg = deg_src;
                for (std::uint32_t m = r.o_mask; m; m &= m - 1) {
                    int c = std::countr_zero(m) + 1;
                    ++f[d.var_of_col[c]];
                    ++deg;
                }
                std::uint64_t base = dst.offset[r.target];
                if (dst.offset[r.target + 1] == base) throw Error("internal: differential left the grading");
                auto idx = static_cast<std::uint32_t>(base + monos_.rank(f, deg, t));
                full.push_back(idx);
                if (r.x_count == 0) gr.push_back(idx);
            }
            flush(full, b.full_idx);
            flush(gr, b.gr_idx);
            b.full_ptr.push_back(static_cast<std::uint32_t>(b.full_idx.size()));
            b.gr_ptr.push_back(static_cast<std::uint32_t>(b.gr_idx.size()));
        });
        return b;
    }

    GradingRanks compute_ranks(int i, int t) {
        const Boundary& b = boundary(i, t);
        const Slice& src = slice(i, t);
        const Slice& dst = slice(i - 1, t);
        GradingRanks out;
        Echelon full(dst.dim());
        for (std::size_t j = 0; j < src.dim(); ++j) {
            BitVec v(dst.dim());
            for (auto q = b.full_ptr[j]; q < b.full_ptr[j + 1]; ++q) v.set(b.full_idx[q]);
            full.insert(std::move(v));
        }
        out.full = full.dim();

        // Graded blocks: local target indices within each Alexander grading.
        std::vector<int> dst_alex(dst.dim());
        std::map<int, std::uint32_t> dst_count;
        std::vector<std::uint32_t> local(dst.dim());
        for_each_entry(dst, [&](std::size_t p, const Expo& e, std::uint64_t k) {
            int a = entry_alex(p, e, t);
            dst_alex[k] = a;
            local[k] = dst_count[a]++;
        });
        std::map<int, Echelon> blocks;
        for_each_entry(src, [&](std::size_t p, const Expo& e, std::uint64_t k) {
            int a = entry_alex(p, e, t);
            auto it = blocks.find(a);
            if (it == blocks.end()) it = blocks.emplace(a, Echelon(dst_count[a])).first;
            BitVec v(dst_count[a]);
            for (auto q = b.gr_ptr[k]; q < b.gr_ptr[k + 1]; ++q) {
                auto tgt = b.gr_idx[q];
                if (dst_alex[tgt] != a) throw Error("internal: graded differential changed the Alexander grading");
                v.set(local[tgt]);
            }
            it->second.insert(std::move(v));
        });
        for (auto& [a, e] : blocks) out.graded[a] = e.dim();
        return out;
    }

    ComputeOptions opt_;
    std::shared_ptr<ComplexData> data_;
    MonomialTable monos_;
    std::mutex mu_;
    std::map<std::pair<int, int>, Slice> slices_;
    std::map<std::pair<int, int>, std::unique_ptr<Boundary>> boundaries_;
    std::map<std::pair<int, int>, GradingRanks> ranks_;
    std::optional<NarrowingInfo> narrow_;
};

// ---------------------------------------------------------------------------
// Free-function surface

struct BigradedBasis {
    int grading = 0;
    std::vector<Term> entries;
    std::vector<int> alexander;
};

inline BigradedBasis chain_basis(const GridDiagram& g, int i, const ComputeOptions& opt = {}) {
    FloerEngine eng(g, opt);
    BigradedBasis out;
    out.grading = i;
    const int t = eng.levels();
    eng.for_each_entry(eng.slice(i, t), [&](std::size_t p, const Expo& e, std::uint64_t) {
        out.entries.push_back({eng.to_monomial(e, t), eng.data().perms[p]});
        out.alexander.push_back(eng.entry_alex(p, e, t));
    });
    return out;
}

// Columns are the grading-i basis, rows the grading-(i-1) basis.
inline BitMatrix boundary_matrix(const GridDiagram& g, int i, const ComputeOptions& opt = {}) {
    FloerEngine eng(g, opt);
    const int t = eng.levels();
    const auto& b = eng.boundary(i, t);
    BitMatrix m(eng.slice(i - 1, t).dim(), eng.slice(i, t).dim());
    for (std::size_t j = 0; j + 1 < b.full_ptr.size(); ++j)
        for (auto q = b.full_ptr[j]; q < b.full_ptr[j + 1]; ++q) m.set(b.full_idx[q], j);
    return m;
}

inline GradedTable graded_homology(const GridDiagram& g, Window w, const ComputeOptions& opt = {}) {
    FloerEngine eng(g, opt);
    auto t = eng.graded_homology(w);
    if (opt.certify) {
        auto wide = eng.graded_homology({w.lo - 2, w.hi});
        if (wide.dims != t.dims) throw WindowError("graded homology changed when the window grew");
    }
    return t;
}

inline std::map<int, int> hat_homology_dims(const GridDiagram& g, Window w, const ComputeOptions& opt = {}) {
    return FloerEngine(g, opt).hat_homology(w);
}

inline Symmetrization symmetrize(const GridDiagram& g, const ComputeOptions& opt = {}) {
    return FloerEngine(g, opt).tau_report().sym;
}

inline bool iota_nontrivial(const GridDiagram& g, HalfInt m, Window w, const ComputeOptions& opt = {}) {
    FloerEngine eng(g, opt);
    auto sym = FloerEngine::symmetrize(eng.graded_homology(w));
    // A^H <= m  iff  A <= m - shift.
    return eng.iota_nontrivial(w, eng.alexander_filtration(), (m - sym.shift).twice());
}

inline HalfInt tau(const GridDiagram& g, const ComputeOptions& opt = {}) {
    return FloerEngine(g, opt).tau_report().tau;
}

} // namespace floergrid
