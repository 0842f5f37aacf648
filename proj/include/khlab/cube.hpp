#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "khlab/diagram.hpp"
#include "khlab/errors.hpp"
#include "khlab/sparse_matrix.hpp"

namespace khlab {

inline constexpr int kDefaultCrossingCap = 20;

enum class Label : std::uint8_t { One, X };

struct LabeledState {
    Epsilon epsilon;
    std::vector<Label> labels;  // one per circle, in circle order

    friend bool operator==(const LabeledState&, const LabeledState&) = default;
};

using LinearCombination = std::vector<std::pair<LabeledState, int>>;

// Basis elements of M_epsilon are indexed by an integer whose binary digits
// (circle 0 most significant) are the labels, 0 = 1 and 1 = X. Increasing
// index is lexicographic order on label vectors with 1 < X.
namespace detail {

inline std::uint64_t label_bit(int circles, int k) { return std::uint64_t{1} << (circles - 1 - k); }

inline std::uint64_t encode_labels(const std::vector<Label>& labels) {
    const int n = static_cast<int>(labels.size());
    std::uint64_t index = 0;
    for (int k = 0; k < n; ++k)
        if (labels[k] == Label::X) index |= label_bit(n, k);
    return index;
}

inline std::vector<Label> decode_labels(std::uint64_t index, int circles) {
    std::vector<Label> labels(circles);
    for (int k = 0; k < circles; ++k)
        labels[k] = (index & label_bit(circles, k)) ? Label::X : Label::One;
    return labels;
}

struct EdgeImage {
    std::uint64_t index = 0;
    int coefficient = 0;
};

/// Images of basis element `src` under the unsigned per-edge map m or Delta.
/// Returns how many of `out` were filled (0, 1 or 2).
inline int edge_images(const EdgeTransition& t, std::uint64_t src, std::array<EdgeImage, 2>& out) {
    const int from_n = static_cast<int>(t.unchanged.size());
    const int to_n = from_n + (t.kind == EdgeKind::Merge ? -1 : 1);
    std::uint64_t base = 0;
    for (int c = 0; c < from_n; ++c)
        if (t.unchanged[c] >= 0 && (src & label_bit(from_n, c))) base |= label_bit(to_n, t.unchanged[c]);
    if (t.kind == EdgeKind::Merge) {
        const bool xa = src & label_bit(from_n, t.from_circles[0]);
        const bool xb = src & label_bit(from_n, t.from_circles[1]);
        if (xa && xb) return 0;  // m(X (x) X) = 0
        if (xa || xb) base |= label_bit(to_n, t.to_circles[0]);
        out[0] = {base, 1};
        return 1;
    }
    const std::uint64_t xa = label_bit(to_n, t.to_circles[0]);
    const std::uint64_t xb = label_bit(to_n, t.to_circles[1]);
    if (src & label_bit(from_n, t.from_circles[0])) {
        out[0] = {base | xa | xb, 1};  // Delta(X) = X (x) X
        return 1;
    }
    out[0] = {base | xb, 1};  // Delta(1) = 1 (x) X + X (x) 1
    out[1] = {base | xa, 1};
    return 2;
}

}  // namespace detail

/// q-degree without the global {n+ - 2n-} shift: #1 - #X + |epsilon|.
inline int unnormalized_q_degree(const LabeledState& s) {
    int q = s.epsilon.weight();
    for (auto l : s.labels) q += l == Label::One ? 1 : -1;
    return q;
}

inline int q_degree(const LabeledState& s, const Diagram& d) {
    return unnormalized_q_degree(s) + d.n_plus() - 2 * d.n_minus();
}

enum class NuEntry : std::uint8_t { Zero, One, Star };

/// (-1)^{number of 1s before the star}.
inline int edge_map_sign(std::span<const NuEntry> nu) {
    int stars = 0, ones = 0;
    for (auto e : nu) {
        if (e == NuEntry::Star)
            ++stars;
        else if (e == NuEntry::One && stars == 0)
            ++ones;
    }
    if (stars != 1) throw InputError("edge label must contain exactly one star");
    return ones % 2 ? -1 : 1;
}

/// Unsigned m / Delta image of a labelled state along a cube edge.
inline LinearCombination apply_edge_map(const EdgeTransition& t, const LabeledState& s) {
    if (!(s.epsilon == t.from) || s.labels.size() != t.unchanged.size())
        throw InputError("state does not live on the source of this edge");
    const int to_n = static_cast<int>(t.unchanged.size()) + (t.kind == EdgeKind::Merge ? -1 : 1);
    std::array<detail::EdgeImage, 2> images;
    const int n = detail::edge_images(t, detail::encode_labels(s.labels), images);
    LinearCombination out;
    for (int k = 0; k < n; ++k)
        out.push_back({LabeledState{t.to, detail::decode_labels(images[k].index, to_n)},
                       images[k].coefficient});
    return out;
}

/// All resolutions with |epsilon| = degree, sorted by epsilon, with the
/// offset of each resolution's block in the chain group basis.
struct CubeColumn {
    int degree = 0;
    std::vector<Resolution> resolutions;
    std::vector<std::uint64_t> offsets;
    std::vector<int> q_degrees;  // normalized, one per basis element

    std::size_t dimension() const { return q_degrees.size(); }

    std::optional<std::size_t> find(Epsilon e) const {
        auto it = std::lower_bound(resolutions.begin(), resolutions.end(), e.bits,
                                   [](const Resolution& r, std::uint64_t b) { return r.epsilon.bits < b; });
        if (it == resolutions.end() || it->epsilon.bits != e.bits) return std::nullopt;
        return static_cast<std::size_t>(it - resolutions.begin());
    }

    LabeledState state(std::size_t index) const {
        auto it = std::upper_bound(offsets.begin(), offsets.end(), static_cast<std::uint64_t>(index));
        const std::size_t r = static_cast<std::size_t>(it - offsets.begin()) - 1;
        return {resolutions[r].epsilon,
                detail::decode_labels(index - offsets[r], resolutions[r].circle_count())};
    }

    std::map<int, std::size_t> q_dimensions() const {
        std::map<int, std::size_t> out;
        for (int q : q_degrees) ++out[q];
        return out;
    }
};

/// Sparse differential with q-degree tags on rows and columns.
struct GradedMatrix {
    SparseMatrix matrix;
    std::vector<int> row_q;
    std::vector<int> col_q;

    std::size_t rows() const { return matrix.rows; }
    std::size_t cols() const { return matrix.cols; }
    std::size_t nonzeros() const { return matrix.entries.size(); }

    /// Splits into one block per q-degree, in local row/column numbering.
    /// Every q-degree that appears on either side gets a (possibly empty)
    /// block.
    std::map<int, SparseMatrix> q_blocks() const {
        std::map<int, SparseMatrix> blocks;
        std::vector<std::size_t> row_local(row_q.size()), col_local(col_q.size());
        for (std::size_t r = 0; r < row_q.size(); ++r) row_local[r] = blocks[row_q[r]].rows++;
        for (std::size_t c = 0; c < col_q.size(); ++c) col_local[c] = blocks[col_q[c]].cols++;
        for (const auto& e : matrix.entries) {
            if (row_q[e.row] != col_q[e.col])
                throw ComplexError("differential entry does not preserve q-degree");
            blocks[row_q[e.row]].entries.push_back({row_local[e.row], col_local[e.col], e.value});
        }
        return blocks;
    }
};

inline void check_crossing_cap(const Diagram& d, int cap) {
    if (cap < 1) throw InputError("crossing cap must be at least 1");
    if (d.crossing_count() > cap)
        throw ResourceError("diagram has " + std::to_string(d.crossing_count()) +
                            " crossings, above the cap of " + std::to_string(cap) +
                            " (2^" + std::to_string(d.crossing_count()) + " resolutions)");
    if (d.crossing_count() > kMaxEncodableCrossings)
        throw ResourceError("diagram exceeds " + std::to_string(kMaxEncodableCrossings) + " crossings");
}

/// Resolutions of column `degree`, in increasing epsilon.
inline CubeColumn build_column(const Diagram& d, int degree) {
    const int m = d.crossing_count();
    CubeColumn col;
    col.degree = degree;
    if (degree < 0 || degree > m) return col;
    const int shift = degree + d.n_plus() - 2 * d.n_minus();
    std::uint64_t offset = 0;
    auto visit = [&](std::uint64_t bits) {
        auto r = resolve(d, Epsilon{bits, m});
        const int n = r.circle_count();
        col.offsets.push_back(offset);
        const std::uint64_t block = std::uint64_t{1} << n;
        for (std::uint64_t b = 0; b < block; ++b)
            col.q_degrees.push_back(n - 2 * std::popcount(b) + shift);
        offset += block;
        col.resolutions.push_back(std::move(r));
    };
    if (degree == 0) {
        visit(0);
        return col;
    }
    // Gosper's hack: all m-bit words of weight `degree`, ascending.
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::uint64_t v = (std::uint64_t{1} << degree) - 1; v < limit;) {
        visit(v);
        const std::uint64_t c = v & (~v + 1);
        const std::uint64_t r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    return col;
}

/// The signed differential from `source` (degree i) to `target` (degree
/// i+1): every edge map carries the sign (-1)^{ones before the flipped
/// coordinate}.
inline GradedMatrix build_differential(const Diagram& d, const CubeColumn& source,
                                       const CubeColumn& target) {
    GradedMatrix g;
    g.matrix.rows = target.dimension();
    g.matrix.cols = source.dimension();
    g.row_q = target.q_degrees;
    g.col_q = source.q_degrees;
    const int m = d.crossing_count();
    std::array<detail::EdgeImage, 2> images;
    for (std::size_t s = 0; s < source.resolutions.size(); ++s) {
        const auto& from = source.resolutions[s];
        const std::uint64_t block = std::uint64_t{1} << from.circle_count();
        for (int k = 0; k < m; ++k) {
            if (from.epsilon[k]) continue;
            const auto t_index = target.find(from.epsilon.flipped(k));
            if (!t_index) throw ComplexError("cube column is missing a vertex");
            const auto& to = target.resolutions[*t_index];
            const auto t = edge_transition(d, from, to, k);
            const int sign = from.epsilon.ones_before(k) % 2 ? -1 : 1;
            for (std::uint64_t b = 0; b < block; ++b) {
                const int n = detail::edge_images(t, b, images);
                for (int j = 0; j < n; ++j)
                    g.matrix.entries.push_back({target.offsets[*t_index] + images[j].index,
                                                source.offsets[s] + b,
                                                sign * images[j].coefficient});
            }
        }
    }
    for (const auto& e : g.matrix.entries)
        if (e.value != 1 && e.value != -1) throw ComplexError("cube differential entry is not +-1");
    return g;
}

/// Unnormalized cube complex C(D) with normalized q-degree tags.
class ChainComplex {
public:
    ChainComplex(Diagram d, std::vector<CubeColumn> columns, std::vector<GradedMatrix> differentials)
        : diagram_(std::move(d)), columns_(std::move(columns)), differentials_(std::move(differentials)) {}

    const Diagram& diagram() const { return diagram_; }
    int crossing_count() const { return diagram_.crossing_count(); }
    int n_plus() const { return diagram_.n_plus(); }
    int n_minus() const { return diagram_.n_minus(); }

    /// Columns 0..m (unnormalized homological degree).
    const std::vector<CubeColumn>& columns() const { return columns_; }
    const CubeColumn& column(int i) const { return columns_.at(i); }
    /// d^i : C^i -> C^{i+1}, for i in [0, m).
    const std::vector<GradedMatrix>& differentials() const { return differentials_; }
    const GradedMatrix& differential(int i) const { return differentials_.at(i); }

    std::size_t dimension(int i) const {
        return i < 0 || i >= static_cast<int>(columns_.size()) ? 0 : columns_[i].dimension();
    }

private:
    Diagram diagram_;
    std::vector<CubeColumn> columns_;
    std::vector<GradedMatrix> differentials_;
};

struct BuildOptions {
    int crossing_cap = kDefaultCrossingCap;
};

inline ChainComplex build_complex(const Diagram& d, BuildOptions options = {}) {
    check_crossing_cap(d, options.crossing_cap);
    const int m = d.crossing_count();
    std::vector<CubeColumn> columns;
    std::vector<GradedMatrix> differentials;
    columns.reserve(m + 1);
    for (int i = 0; i <= m; ++i) {
        columns.push_back(build_column(d, i));
        if (i > 0) differentials.push_back(build_differential(d, columns[i - 1], columns[i]));
    }
    return ChainComplex(d, std::move(columns), std::move(differentials));
}

/// Text dump used by golden tests: column dimensions, then every nonzero
/// of every differential as "row col value".
inline std::string dump_complex(const ChainComplex& c) {
    std::ostringstream out;
    out << "crossings " << c.crossing_count() << " n+ " << c.n_plus() << " n- " << c.n_minus() << '\n';
    for (const auto& col : c.columns()) out << "C" << col.degree << " dim " << col.dimension() << '\n';
    for (std::size_t i = 0; i < c.differentials().size(); ++i) {
        const auto& g = c.differentials()[i];
        out << "d" << i << ' ' << g.rows() << 'x' << g.cols() << " nnz " << g.nonzeros() << '\n';
        auto entries = g.matrix.entries;
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return std::pair(a.row, a.col) < std::pair(b.row, b.col);
        });
        for (const auto& e : entries) out << "  " << e.row << ' ' << e.col << ' ' << e.value << '\n';
    }
    return out.str();
}

}  // namespace khlab
