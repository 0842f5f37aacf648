#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "khlab/cube.hpp"
#include "khlab/errors.hpp"
#include "khlab/smith.hpp"

namespace khlab {

/// One group H^{i,j} = Z^free_rank (+) Z/t1 (+) Z/t2 ...
struct HomologyEntry {
    std::size_t free_rank = 0;
    std::vector<BigInt> torsion;  // invariant factors > 1, ascending

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }

    friend bool operator==(const HomologyEntry&, const HomologyEntry&) = default;
};

/// Finitely supported table (i, j) -> H^{i,j}; zero groups are not stored.
class BigradedGroup {
public:
    using Key = std::pair<int, int>;

    void set(int i, int j, HomologyEntry e) {
        if (e.is_zero())
            table_.erase({i, j});
        else
            table_[{i, j}] = std::move(e);
    }

    HomologyEntry at(int i, int j) const {
        auto it = table_.find({i, j});
        return it == table_.end() ? HomologyEntry{} : it->second;
    }

    /// Entries sorted by (i, j).
    const std::map<Key, HomologyEntry>& entries() const { return table_; }
    bool empty() const { return table_.empty(); }
    std::size_t size() const { return table_.size(); }

    /// All nonzero entries in homological degree i, keyed by j.
    std::map<int, HomologyEntry> row(int i) const {
        std::map<int, HomologyEntry> out;
        for (const auto& [k, e] : table_)
            if (k.first == i) out[k.second] = e;
        return out;
    }

    BigradedGroup shifted(int di, int dj) const {
        BigradedGroup out;
        for (const auto& [k, e] : table_) out.table_[{k.first + di, k.second + dj}] = e;
        return out;
    }

    /// Every q-degree j replaced by -j.
    BigradedGroup q_negated() const {
        BigradedGroup out;
        for (const auto& [k, e] : table_) out.table_[{k.first, -k.second}] = e;
        return out;
    }

    /// Free part only (homology with rational coefficients).
    BigradedGroup rational() const {
        BigradedGroup out;
        for (const auto& [k, e] : table_)
            if (e.free_rank) out.table_[k] = HomologyEntry{e.free_rank, {}};
        return out;
    }

    friend bool operator==(const BigradedGroup&, const BigradedGroup&) = default;

private:
    std::map<Key, HomologyEntry> table_;
};

/// Homology at a single (i, j): d_in maps into the block, d_out leaves it.
/// free rank = cols(d_out) - rank(d_out) - rank(d_in); torsion from the
/// Smith form of d_in.
inline HomologyEntry homology_block(const SparseMatrix& d_in, const SparseMatrix& d_out) {
    if (d_in.rows != d_out.cols)
        throw ComplexError("blocks do not compose: " + std::to_string(d_in.rows) + " vs " +
                           std::to_string(d_out.cols));
    if (!multiply(d_out, d_in).entries.empty()) throw ComplexError("d_out * d_in != 0 on block");
    const auto in = smith_normal_form(d_in);
    const auto out = smith_normal_form(d_out);
    return {d_out.cols - out.rank - in.rank, in.torsion()};
}

struct KhovanovHomology {
    BigradedGroup normalized;    // homology of C(D)[-n-]{n+ - 2n-}
    BigradedGroup unnormalized;  // homology of C(D)
    int n_plus = 0;
    int n_minus = 0;
};

namespace detail {

inline std::map<int, SmithForm> block_smith_forms(const GradedMatrix& g) {
    std::map<int, SmithForm> out;
    for (const auto& [q, block] : g.q_blocks()) out[q] = smith_normal_form(block);
    return out;
}

/// Adds the groups of column i. `incoming` are the Smith forms of d^{i-1}
/// per q-degree, `outgoing` those of d^i.
inline void add_column_homology(BigradedGroup& table, int i, const CubeColumn& column,
                                const std::map<int, SmithForm>& incoming,
                                const std::map<int, SmithForm>& outgoing) {
    for (const auto& [q, dim] : column.q_dimensions()) {
        HomologyEntry e;
        std::size_t rank_in = 0, rank_out = 0;
        if (auto it = incoming.find(q); it != incoming.end()) {
            rank_in = it->second.rank;
            e.torsion = it->second.torsion();
        }
        if (auto it = outgoing.find(q); it != outgoing.end()) rank_out = it->second.rank;
        if (rank_in + rank_out > dim) throw ComplexError("ranks exceed block dimension; d*d != 0");
        e.free_rank = dim - rank_in - rank_out;
        table.set(i, q, std::move(e));
    }
}

inline KhovanovHomology finish(BigradedGroup normalized_q, int n_plus, int n_minus) {
    KhovanovHomology h;
    h.n_plus = n_plus;
    h.n_minus = n_minus;
    h.unnormalized = normalized_q.shifted(0, -(n_plus - 2 * n_minus));
    h.normalized = normalized_q.shifted(-n_minus, 0);
    return h;
}

}  // namespace detail

/// Integral homology of a built complex, block by block in q-degree.
inline KhovanovHomology homology_table(const ChainComplex& c) {
    const int m = c.crossing_count();
    std::vector<std::map<int, SmithForm>> smith(m);
    for (int i = 0; i < m; ++i) smith[i] = detail::block_smith_forms(c.differential(i));
    BigradedGroup table;
    const std::map<int, SmithForm> none;
    for (int i = 0; i <= m; ++i)
        detail::add_column_homology(table, i, c.column(i), i > 0 ? smith[i - 1] : none,
                                    i < m ? smith[i] : none);
    return detail::finish(std::move(table), c.n_plus(), c.n_minus());
}

/// Same result as building the complex first, but only two adjacent cube
/// columns are alive at any time.
inline KhovanovHomology homology_table(const Diagram& d, BuildOptions options = {}) {
    check_crossing_cap(d, options.crossing_cap);
    const int m = d.crossing_count();
    BigradedGroup table;
    CubeColumn current = build_column(d, 0);
    std::map<int, SmithForm> incoming;
    for (int i = 0; i <= m; ++i) {
        std::map<int, SmithForm> outgoing;
        CubeColumn next;
        if (i < m) {
            next = build_column(d, i + 1);
            outgoing = detail::block_smith_forms(build_differential(d, current, next));
        }
        detail::add_column_homology(table, i, current, incoming, outgoing);
        incoming = std::move(outgoing);
        current = std::move(next);
    }
    return detail::finish(std::move(table), d.n_plus(), d.n_minus());
}

}  // namespace khlab
