#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "khlab/sparse_matrix.hpp"

namespace khlab {

using BigInt = boost::multiprecision::cpp_int;

/// Nonzero invariant factors d1 | d2 | ... of an integer matrix.
struct SmithForm {
    std::vector<BigInt> diagonal;
    std::size_t rank = 0;

    /// Invariant factors greater than 1.
    std::vector<BigInt> torsion() const {
        std::vector<BigInt> out;
        for (const auto& d : diagonal)
            if (d > 1) out.push_back(d);
        return out;
    }
};

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

namespace detail {

/// Thrown by the 64-bit fast path; the caller retries with BigInt.
struct Overflow {};

inline constexpr std::int64_t kFastLimit = std::int64_t{1} << 62;

inline std::int64_t guard(std::int64_t v) {
    if (v >= kFastLimit || v <= -kFastLimit) throw Overflow{};
    return v;
}

// a - f*b
inline std::int64_t sub_mul(std::int64_t a, std::int64_t f, std::int64_t b) {
    std::int64_t prod, out;
    if (__builtin_mul_overflow(f, b, &prod) || __builtin_sub_overflow(a, prod, &out))
        throw Overflow{};
    return guard(out);
}
inline BigInt sub_mul(const BigInt& a, const BigInt& f, const BigInt& b) { return a - f * b; }

inline std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw Overflow{};
    return guard(out);
}
inline BigInt add(const BigInt& a, const BigInt& b) { return a + b; }

inline std::int64_t magnitude(std::int64_t v) { return v < 0 ? -v : v; }
inline BigInt magnitude(const BigInt& v) { return boost::multiprecision::abs(v); }

inline BigInt to_big(std::int64_t v) { return BigInt(v); }
inline BigInt to_big(const BigInt& v) { return v; }

/// Reduces `a` in place to diagonal form by unimodular row and column
/// operations, always pivoting on a nonzero entry of minimal magnitude.
/// Column operations are mirrored into `right` when given. Returns the
/// diagonal magnitudes in pivot order (zeros excluded).
template <class Int>
std::vector<Int> dense_diagonalize(DenseMatrix<Int>& a, DenseMatrix<Int>* right = nullptr) {
    std::vector<Int> diag;
    const std::size_t n_rows = a.rows(), n_cols = a.cols();
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        a.swap_cols(x, y);
        if (right) right->swap_cols(x, y);
    };
    for (std::size_t t = 0; t < std::min(n_rows, n_cols); ++t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t r = t; r < n_rows; ++r)
            for (std::size_t c = t; c < n_cols; ++c)
                if (a(r, c) != 0 &&
                    (!best || magnitude(a(r, c)) < magnitude(a(best->first, best->second))))
                    best = {r, c};
        if (!best) break;
        a.swap_rows(t, best->first);
        swap_cols(t, best->second);
        for (;;) {
            bool clean = true;
            for (std::size_t r = t + 1; r < n_rows; ++r) {
                if (a(r, t) == 0) continue;
                Int q = a(r, t) / a(t, t);
                for (std::size_t c = t; c < n_cols; ++c) a(r, c) = sub_mul(a(r, c), q, a(t, c));
                if (a(r, t) != 0) clean = false;
            }
            for (std::size_t c = t + 1; c < n_cols; ++c) {
                if (a(t, c) == 0) continue;
                Int q = a(t, c) / a(t, t);
                for (std::size_t r = t; r < n_rows; ++r) a(r, c) = sub_mul(a(r, c), q, a(r, t));
                if (right)
                    for (std::size_t r = 0; r < right->rows(); ++r)
                        (*right)(r, c) = sub_mul((*right)(r, c), q, (*right)(r, t));
                if (a(t, c) != 0) clean = false;
            }
            if (clean) break;
            // A remainder smaller than the pivot survived; move it to the pivot.
            std::size_t br = t, bc = t;
            for (std::size_t r = t + 1; r < n_rows; ++r)
                if (a(r, t) != 0 && magnitude(a(r, t)) < magnitude(a(br, bc))) br = r, bc = t;
            for (std::size_t c = t + 1; c < n_cols; ++c)
                if (a(t, c) != 0 && magnitude(a(t, c)) < magnitude(a(br, bc))) br = t, bc = c;
            a.swap_rows(t, br);
            swap_cols(t, bc);
        }
        diag.push_back(magnitude(a(t, t)));
    }
    return diag;
}

/// Sorts nonzero diagonal entries into a divisibility chain via
/// (a, b) -> (gcd, lcm), which preserves the isomorphism type.
inline std::vector<BigInt> divisibility_chain(std::vector<BigInt> d) {
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            BigInt g = boost::multiprecision::gcd(d[i], d[j]);
            if (g == d[i]) continue;
            BigInt l = d[i] / g * d[j];
            d[i] = g;
            d[j] = l;
        }
    std::sort(d.begin(), d.end());
    return d;
}

/// Sparse elimination on unit pivots, leaving the non-unit core for the
/// dense reduction.
template <class Int>
class UnitEliminator {
public:
    explicit UnitEliminator(const SparseMatrix& m)
        : rows_(m.rows), row_alive_(m.rows, true), col_rows_(m.cols), col_count_(m.cols, 0) {
        for (const auto& e : m.entries)
            if (e.value != 0) rows_[e.row].push_back({static_cast<std::uint32_t>(e.col), Int(e.value)});
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            std::sort(rows_[r].begin(), rows_[r].end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            for (const auto& [c, v] : rows_[r]) {
                col_rows_[c].push_back(static_cast<std::uint32_t>(r));
                ++col_count_[c];
            }
        }
    }

    /// Runs unit-pivot elimination to exhaustion; returns the pivot count.
    std::size_t eliminate() {
        std::size_t pivots = 0;
        while (auto pivot = find_pivot()) {
            pivot_on(pivot->first, pivot->second);
            ++pivots;
        }
        return pivots;
    }

    DenseMatrix<Int> remainder() const {
        std::vector<std::size_t> live_rows;
        std::vector<std::int64_t> col_index(col_rows_.size(), -1);
        std::size_t n_cols = 0;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!row_alive_[r] || rows_[r].empty()) continue;
            live_rows.push_back(r);
            for (const auto& [c, v] : rows_[r])
                if (col_index[c] < 0) col_index[c] = static_cast<std::int64_t>(n_cols++);
        }
        DenseMatrix<Int> out(live_rows.size(), n_cols);
        for (std::size_t k = 0; k < live_rows.size(); ++k)
            for (const auto& [c, v] : rows_[live_rows[k]]) out(k, col_index[c]) = v;
        return out;
    }

private:
    using Row = std::vector<std::pair<std::uint32_t, Int>>;

    std::optional<std::pair<std::size_t, std::uint32_t>> find_pivot() const {
        std::optional<std::pair<std::size_t, std::uint32_t>> best;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!row_alive_[r] || rows_[r].empty()) continue;
            const std::size_t row_cost = rows_[r].size() - 1;
            for (const auto& [c, v] : rows_[r]) {
                if (v != 1 && v != -1) continue;
                std::size_t cost = row_cost * (col_count_[c] - 1);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = {r, c};
                    if (cost == 0) return best;
                }
            }
        }
        return best;
    }

    void pivot_on(std::size_t pr, std::uint32_t pc) {
        const Row pivot_row = rows_[pr];
        Int pv = 0;
        for (const auto& [c, v] : pivot_row)
            if (c == pc) pv = v;
        auto& candidates = col_rows_[pc];
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (std::uint32_t r : candidates) {
            if (r == pr || !row_alive_[r]) continue;
            auto& row = rows_[r];
            auto it = std::lower_bound(row.begin(), row.end(), pc,
                                       [](const auto& x, std::uint32_t c) { return x.first < c; });
            if (it == row.end() || it->first != pc) continue;
            // row -= (a / pv) * pivot_row, with pv = +-1
            const Int factor = it->second * pv;
            Row merged;
            merged.reserve(row.size() + pivot_row.size());
            auto a = row.begin();
            auto b = pivot_row.begin();
            while (a != row.end() || b != pivot_row.end()) {
                if (b == pivot_row.end() || (a != row.end() && a->first < b->first)) {
                    merged.push_back(*a++);
                } else if (a == row.end() || b->first < a->first) {
                    Int v = sub_mul(Int(0), factor, b->second);
                    col_rows_[b->first].push_back(r);
                    ++col_count_[b->first];
                    merged.push_back({b->first, std::move(v)});
                    ++b;
                } else {
                    Int v = sub_mul(a->second, factor, b->second);
                    if (v != 0)
                        merged.push_back({a->first, std::move(v)});
                    else
                        --col_count_[a->first];
                    ++a;
                    ++b;
                }
            }
            row = std::move(merged);
        }
        for (const auto& [c, v] : pivot_row) --col_count_[c];
        row_alive_[pr] = false;
        rows_[pr].clear();
        candidates.clear();
        col_count_[pc] = 0;
    }

    std::vector<Row> rows_;
    std::vector<bool> row_alive_;
    std::vector<std::vector<std::uint32_t>> col_rows_;
    std::vector<std::size_t> col_count_;
};

template <class Int>
SmithForm smith_sparse(const SparseMatrix& m) {
    UnitEliminator<Int> elim(m);
    const std::size_t units = elim.eliminate();
    auto core = elim.remainder();
    auto diag = dense_diagonalize(core);
    std::vector<BigInt> all(units, BigInt(1));
    for (const auto& d : diag) all.push_back(to_big(d));
    SmithForm out;
    out.diagonal = divisibility_chain(std::move(all));
    out.rank = out.diagonal.size();
    return out;
}

}  // namespace detail

/// Smith normal form of a sparse integer matrix. Runs in 64-bit arithmetic
/// and redoes the whole computation with arbitrary precision if any
/// intermediate value leaves the safe range.
inline SmithForm smith_normal_form(const SparseMatrix& m) {
    try {
        return detail::smith_sparse<std::int64_t>(m);
    } catch (const detail::Overflow&) {
        return detail::smith_sparse<BigInt>(m);
    }
}

inline SmithForm smith_normal_form(const std::vector<std::vector<long long>>& dense) {
    return smith_normal_form(SparseMatrix::from_rows(dense));
}

inline SmithForm smith_normal_form(DenseMatrix<BigInt> m) {
    auto diag = detail::dense_diagonalize(m);
    SmithForm out;
    out.diagonal = detail::divisibility_chain(std::move(diag));
    out.rank = out.diagonal.size();
    return out;
}

inline std::size_t integer_rank(const SparseMatrix& m) { return smith_normal_form(m).rank; }

/// A Z-basis of the integer kernel {x : M x = 0}, read off the right
/// transform of the Smith reduction.
inline std::vector<std::vector<BigInt>> integer_kernel_basis(const SparseMatrix& m) {
    DenseMatrix<BigInt> a(m.rows, m.cols);
    for (const auto& e : m.entries) a(e.row, e.col) += e.value;
    auto right = DenseMatrix<BigInt>::identity(m.cols);
    const auto diag = detail::dense_diagonalize(a, &right);
    std::vector<std::vector<BigInt>> basis;
    for (std::size_t c = diag.size(); c < m.cols; ++c) {
        std::vector<BigInt> v(m.cols);
        for (std::size_t r = 0; r < m.cols; ++r) v[r] = right(r, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace khlab
