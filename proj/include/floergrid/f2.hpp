#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace floergrid {

class BitVec {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& o) {
        if (o.n_ != n_) throw DimensionMismatch("bit vector length mismatch");
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    bool any() const {
        for (auto w : w_) if (w) return true;
        return false;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::size_t find_next(std::size_t from) const {
        if (from >= n_) return npos;
        std::size_t k = from >> 6;
        std::uint64_t w = w_[k] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return (k << 6) + static_cast<std::size_t>(std::countr_zero(w));
            if (++k >= w_.size()) return npos;
            w = w_[k];
        }
    }
    std::size_t find_first() const { return find_next(0); }

    bool dot(const BitVec& o) const {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
        return std::popcount(acc) & 1;
    }

    std::string str() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i) if (test(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}
    BitMatrix(std::initializer_list<std::initializer_list<int>> entries) {
        cols_ = entries.size() ? entries.begin()->size() : 0;
        for (const auto& r : entries) {
            if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
            BitVec v(cols_);
            std::size_t j = 0;
            for (int e : r) { if (e & 1) v.set(j); ++j; }
            rows_.push_back(std::move(v));
        }
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.rows_[i].set(i);
        return m;
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    bool get(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
    void set(std::size_t i, std::size_t j) { rows_[i].set(j); }
    void flip(std::size_t i, std::size_t j) { rows_[i].flip(j); }
    const BitVec& row(std::size_t i) const { return rows_[i]; }
    BitVec& row(std::size_t i) { return rows_[i]; }

    void push_row(BitVec v) {
        if (rows_.empty() && cols_ == 0) cols_ = v.size();
        if (v.size() != cols_) throw DimensionMismatch("row length mismatch");
        rows_.push_back(std::move(v));
    }

    BitMatrix transpose() const {
        BitMatrix t(cols_, rows());
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = rows_[i].find_first(); j != BitVec::npos; j = rows_[i].find_next(j + 1))
                t.rows_[j].set(i);
        return t;
    }

    BitVec apply(const BitVec& v) const {
        if (v.size() != cols_) throw DimensionMismatch("vector length does not match column count");
        BitVec out(rows());
        for (std::size_t i = 0; i < rows(); ++i) if (rows_[i].dot(v)) out.set(i);
        return out;
    }

private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

// Row-echelon span with leftmost pivots. Rows are not back-substituted.
class Echelon {
public:
    explicit Echelon(std::size_t ambient) : ambient_(ambient), pivot_row_(ambient, -1) {}

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return rows_.size(); }
    const std::vector<BitVec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    // Clears leading pivot positions of v; returns its new first bit, or npos if v reduced to 0.
    std::size_t reduce_lead(BitVec& v) const { return reduce_lead(v, nullptr, nullptr); }

    bool contains(BitVec v) const { return reduce_lead(v) == BitVec::npos; }

    bool insert(BitVec v) {
        check(v);
        std::size_t p = reduce_lead(v);
        if (p == BitVec::npos) return false;
        add(std::move(v), p);
        return true;
    }

protected:
    std::size_t reduce_lead(BitVec& v, BitVec* track, const std::vector<BitVec>* tracks) const {
        std::size_t p = v.find_first();
        while (p != BitVec::npos) {
            int r = pivot_row_[p];
            if (r < 0) return p;
            v ^= rows_[static_cast<std::size_t>(r)];
            if (track) *track ^= (*tracks)[static_cast<std::size_t>(r)];
            p = v.find_next(p + 1);
        }
        return p;
    }
    void add(BitVec v, std::size_t p) {
        pivot_row_[p] = static_cast<int>(rows_.size());
        pivots_.push_back(p);
        rows_.push_back(std::move(v));
    }
    void check(const BitVec& v) const {
        if (v.size() != ambient_) throw DimensionMismatch("vector not in ambient space");
    }

    std::size_t ambient_;
    std::vector<BitVec> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<int> pivot_row_;
};

// Subspace of F_2^ambient held as a reduced row-echelon basis.
class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

    static Subspace span(std::size_t ambient, const std::vector<BitVec>& vectors) {
        Echelon e(ambient);
        for (const auto& v : vectors) e.insert(v);
        return from_echelon(e);
    }
    static Subspace row_space(const BitMatrix& m) {
        std::vector<BitVec> rows;
        for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
        return span(m.cols(), rows);
    }

    static Subspace from_echelon(const Echelon& e) {
        Subspace s(e.ambient_dim());
        std::vector<std::size_t> order(e.dim());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return e.pivots()[a] < e.pivots()[b]; });
        for (auto k : order) {
            s.basis_.push_back(e.rows()[k]);
            s.pivots_.push_back(e.pivots()[k]);
        }
        for (std::size_t k = s.basis_.size(); k-- > 0;)
            for (std::size_t r = 0; r < k; ++r)
                if (s.basis_[r].test(s.pivots_[k])) s.basis_[r] ^= s.basis_[k];
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BitVec>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    BitMatrix as_matrix() const {
        BitMatrix m(0, ambient_);
        for (const auto& v : basis_) m.push_row(v);
        return m;
    }

    bool contains(BitVec v) const {
        if (v.size() != ambient_) throw DimensionMismatch("vector not in ambient space");
        for (std::size_t k = 0; k < basis_.size(); ++k)
            if (v.test(pivots_[k])) v ^= basis_[k];
        return !v.any();
    }

private:
    std::size_t ambient_;
    std::vector<BitVec> basis_;
    std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const BitMatrix& m) {
    Echelon e(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) e.insert(m.row(i));
    return e.dim();
}

// Echelon of image vectors that also records, for every input, the combination of inputs
// reducing it. Inputs reducing to zero yield kernel vectors supported on indices <= their own.
class TrackedEchelon : public Echelon {
public:
    TrackedEchelon(std::size_t ambient, std::size_t sources) : Echelon(ambient), sources_(sources) {}

    // Feeds the image of source index j. Returns the kernel vector if the image is dependent.
    std::optional<BitVec> feed(std::size_t j, BitVec image) {
        check(image);
        BitVec combo(sources_);
        combo.set(j);
        std::size_t p = reduce_lead(image, &combo, &combos_);
        if (p == BitVec::npos) return combo;
        add(std::move(image), p);
        combos_.push_back(std::move(combo));
        return std::nullopt;
    }

private:
    std::size_t sources_;
    std::vector<BitVec> combos_;
};

inline Subspace kernel_basis(const BitMatrix& m) {
    BitMatrix t = m.transpose();
    TrackedEchelon e(m.rows(), m.cols());
    std::vector<BitVec> kernel;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (auto z = e.feed(j, t.row(j))) kernel.push_back(std::move(*z));
    return Subspace::span(m.cols(), kernel);
}

inline std::size_t relative_rank(const Subspace& z, const Subspace& b) {
    if (z.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("relative rank of subspaces in different ambient spaces");
    Echelon e(b.ambient_dim());
    for (const auto& v : b.basis()) e.insert(v);
    std::size_t base = e.dim();
    for (const auto& v : z.basis()) e.insert(v);
    return e.dim() - base;
}

} // namespace floergrid
