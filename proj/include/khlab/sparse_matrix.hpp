#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace khlab {

struct MatrixEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    std::int64_t value = 0;

    friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Coordinate-list integer matrix. Entries are unique per (row, col).
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<MatrixEntry> entries;

    static SparseMatrix from_rows(const std::vector<std::vector<long long>>& dense) {
        SparseMatrix m;
        m.rows = dense.size();
        m.cols = dense.empty() ? 0 : dense.front().size();
        for (std::size_t r = 0; r < dense.size(); ++r)
            for (std::size_t c = 0; c < dense[r].size(); ++c)
                if (dense[r][c] != 0) m.entries.push_back({r, c, dense[r][c]});
        return m;
    }

    std::vector<std::vector<long long>> to_rows() const {
        std::vector<std::vector<long long>> dense(rows, std::vector<long long>(cols, 0));
        for (const auto& e : entries) dense[e.row][e.col] += e.value;
        return dense;
    }
};

/// Product a*b, accumulated in a map; zero results are dropped.
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> b_rows(b.rows);
    for (const auto& e : b.entries) b_rows[e.row].push_back({e.col, e.value});
    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> acc;
    for (const auto& e : a.entries)
        for (const auto& [col, v] : b_rows[e.col]) acc[{e.row, col}] += e.value * v;
    SparseMatrix out;
    out.rows = a.rows;
    out.cols = b.cols;
    for (const auto& [rc, v] : acc)
        if (v != 0) out.entries.push_back({rc.first, rc.second, v});
    return out;
}

}  // namespace khlab
