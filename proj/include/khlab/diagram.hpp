#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "khlab/disjoint_set.hpp"
#include "khlab/errors.hpp"

namespace khlab {

/// Hard ceiling on crossings imposed by the 64-bit cube vertex encoding.
inline constexpr int kMaxEncodableCrossings = 62;

/// A vertex of the cube of resolutions: one smoothing bit per crossing.
/// Bit k of `bits` is the smoothing of crossing k (in diagram order); the
/// integer value of `bits` is the canonical sort key of the vertex.
struct Epsilon {
    std::uint64_t bits = 0;
    int length = 0;

    bool operator[](int k) const { return (bits >> k) & 1U; }
    int weight() const { return std::popcount(bits); }
    Epsilon flipped(int k) const { return {bits ^ (std::uint64_t{1} << k), length}; }
    /// Number of 1-coordinates at positions before `k`.
    int ones_before(int k) const {
        return std::popcount(bits & ((std::uint64_t{1} << k) - 1));
    }

    static Epsilon from_bits(const std::vector<int>& v) {
        Epsilon e{0, static_cast<int>(v.size())};
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k]) e.bits |= std::uint64_t{1} << k;
        return e;
    }

    friend bool operator==(const Epsilon&, const Epsilon&) = default;
};

/// One crossing in PD orientation: arcs[0] is the incoming under-strand and
/// the rest follow counterclockwise. The 0-smoothing joins (a,b),(c,d); the
/// 1-smoothing joins (a,d),(b,c). For a positive crossing the 0-smoothing is
/// the oriented one, for a negative crossing the 1-smoothing is.
struct Crossing {
    std::array<int, 4> arcs{};
    int sign = +1;

    std::array<std::pair<int, int>, 2> smoothing(bool one) const {
        const auto& [a, b, c, d] = arcs;
        if (!one) return {{{a, b}, {c, d}}};
        return {{{a, d}, {b, c}}};
    }

    friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// Where a braid strand position sits in the closure: either the arc at the
/// top of that position, or a free loop when no letter touches the strand.
struct StrandAnchor {
    bool free_loop = false;
    int id = 0;  // arc label, or free-loop index

    friend bool operator==(const StrandAnchor&, const StrandAnchor&) = default;
};

class Diagram {
public:
    Diagram() = default;

    Diagram(std::vector<Crossing> crossings, int free_loops,
            std::vector<StrandAnchor> anchors = {})
        : crossings_(std::move(crossings)),
          free_loops_(free_loops),
          anchors_(std::move(anchors)) {
        if (free_loops_ < 0) throw InputError("negative free loop count");
        std::map<int, int> uses;
        for (const auto& c : crossings_) {
            if (c.sign != 1 && c.sign != -1) throw InputError("crossing sign must be +1 or -1");
            for (int a : c.arcs) ++uses[a];
            (c.sign > 0 ? n_plus_ : n_minus_) += 1;
        }
        for (const auto& [label, count] : uses) {
            if (count != 2)
                throw InputError("arc " + std::to_string(label) + " appears " +
                                 std::to_string(count) + " times (expected 2)");
            arcs_.push_back(label);
        }
        endpoints_.reserve(crossings_.size());
        for (const auto& c : crossings_) {
            std::array<int, 4> idx{};
            for (int k = 0; k < 4; ++k) idx[k] = arc_index(c.arcs[k]);
            endpoints_.push_back(idx);
        }
    }

    const std::vector<Crossing>& crossings() const { return crossings_; }
    int crossing_count() const { return static_cast<int>(crossings_.size()); }
    int free_loops() const { return free_loops_; }
    int n_plus() const { return n_plus_; }
    int n_minus() const { return n_minus_; }
    /// Sorted arc labels.
    const std::vector<int>& arcs() const { return arcs_; }
    const std::vector<StrandAnchor>& strand_anchors() const { return anchors_; }
    bool empty() const { return crossings_.empty() && free_loops_ == 0; }

    /// Dense index of an arc label in `arcs()`.
    int arc_index(int label) const {
        auto it = std::lower_bound(arcs_.begin(), arcs_.end(), label);
        return static_cast<int>(it - arcs_.begin());
    }
    /// Crossing endpoints as dense arc indices.
    const std::array<int, 4>& endpoint_indices(int crossing) const {
        return endpoints_[crossing];
    }

    /// Number of link components: arcs a-c and b-d continue through each
    /// crossing; free loops are components of their own.
    int component_count() const {
        DisjointSet ds(arcs_.size());
        for (const auto& e : endpoints_) {
            ds.unite(e[0], e[2]);
            ds.unite(e[1], e[3]);
        }
        int roots = 0;
        for (std::size_t k = 0; k < arcs_.size(); ++k)
            if (ds.find(k) == k) ++roots;
        return roots + free_loops_;
    }

    /// Same diagram with crossings listed in a different order.
    Diagram reordered(const std::vector<int>& order) const {
        std::vector<Crossing> out;
        out.reserve(order.size());
        for (int k : order) out.push_back(crossings_.at(k));
        if (out.size() != crossings_.size()) throw InputError("reorder size mismatch");
        return Diagram(std::move(out), free_loops_, anchors_);
    }

private:
    std::vector<Crossing> crossings_;
    int free_loops_ = 0;
    std::vector<StrandAnchor> anchors_;
    int n_plus_ = 0;
    int n_minus_ = 0;
    std::vector<int> arcs_;
    std::vector<std::array<int, 4>> endpoints_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline int parse_int(std::string_view s, std::string_view what) {
    s = trim(s);
    int value = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw InputError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
    return value;
}

}  // namespace detail

/// Parses signed PD text: one "X[a,b,c,d] <sign>" record per line, sign
/// being '+' or '-'. Blank lines are ignored.
inline Diagram from_pd(std::string_view text) {
    std::vector<Crossing> crossings;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = " on line " + std::to_string(line_no);
        if (line.size() < 2 || line[0] != 'X' || line[1] != '[')
            throw InputError("malformed PD record" + where);
        auto close = line.find(']');
        if (close == std::string_view::npos) throw InputError("missing ']'" + where);
        std::string_view body = line.substr(2, close - 2);
        Crossing c;
        for (int k = 0; k < 4; ++k) {
            auto comma = body.find(',');
            if ((k < 3) != (comma != std::string_view::npos))
                throw InputError("PD record needs exactly 4 arcs" + where);
            c.arcs[k] = detail::parse_int(body.substr(0, comma), "arc label");
            body = k < 3 ? body.substr(comma + 1) : std::string_view{};
        }
        std::string_view sign = detail::trim(line.substr(close + 1));
        if (sign.empty()) throw InputError("missing crossing sign" + where);
        if (sign == "+")
            c.sign = +1;
        else if (sign == "-")
            c.sign = -1;
        else
            throw InputError("crossing sign must be '+' or '-'" + where);
        crossings.push_back(c);
    }
    return Diagram(std::move(crossings), 0);
}

/// Inverse of `from_pd` for the crossing records (free loops are not
/// expressible in PD text).
inline std::string to_pd(const Diagram& d) {
    std::ostringstream out;
    for (const auto& c : d.crossings())
        out << "X[" << c.arcs[0] << ',' << c.arcs[1] << ',' << c.arcs[2] << ','
            << c.arcs[3] << "] " << (c.sign > 0 ? '+' : '-') << '\n';
    return out.str();
}

/// A total resolution: the circles left after smoothing every crossing.
/// Circles are ordered by their minimal arc label; free loops come last in
/// diagram order.
struct Resolution {
    Epsilon epsilon;
    std::vector<int> circle_of_arc;  // dense arc index -> circle index
    std::vector<std::vector<int>> circles;  // arc labels; empty for free loops
    int free_loop_base = 0;  // index of the first free-loop circle

    int circle_count() const { return static_cast<int>(circles.size()); }
    int circle_of_free_loop(int k) const { return free_loop_base + k; }
};

inline Resolution resolve(const Diagram& d, Epsilon epsilon) {
    if (epsilon.length != d.crossing_count())
        throw InputError("resolution vector has length " + std::to_string(epsilon.length) +
                         ", diagram has " + std::to_string(d.crossing_count()) + " crossings");
    const auto n_arcs = d.arcs().size();
    DisjointSet ds(n_arcs);
    for (int k = 0; k < d.crossing_count(); ++k) {
        const auto& e = d.endpoint_indices(k);
        if (epsilon[k]) {
            ds.unite(e[0], e[3]);
            ds.unite(e[1], e[2]);
        } else {
            ds.unite(e[0], e[1]);
            ds.unite(e[2], e[3]);
        }
    }
    Resolution r;
    r.epsilon = epsilon;
    r.circle_of_arc.assign(n_arcs, -1);
    std::vector<int> circle_of_root(n_arcs, -1);
    for (std::size_t a = 0; a < n_arcs; ++a) {
        auto root = ds.find(a);
        if (circle_of_root[root] < 0) {
            circle_of_root[root] = static_cast<int>(r.circles.size());
            r.circles.emplace_back();
        }
        r.circle_of_arc[a] = circle_of_root[root];
        r.circles[circle_of_root[root]].push_back(d.arcs()[a]);
    }
    r.free_loop_base = static_cast<int>(r.circles.size());
    for (int k = 0; k < d.free_loops(); ++k) r.circles.emplace_back();
    return r;
}

enum class EdgeKind { Merge, Split };

/// A cube edge epsilon -> epsilon' flipping one coordinate from 0 to 1.
/// Merge: from_circles[0], from_circles[1] -> to_circles[0].
/// Split: from_circles[0] -> to_circles[0], to_circles[1].
/// Both pairs are listed in increasing circle index.
struct EdgeTransition {
    Epsilon from;
    Epsilon to;
    int flip = 0;
    EdgeKind kind = EdgeKind::Merge;
    std::array<int, 2> from_circles{-1, -1};
    std::array<int, 2> to_circles{-1, -1};
    /// from-circle index -> to-circle index for untouched circles, -1 for
    /// the circles taking part in the merge or split.
    std::vector<int> unchanged;
};

/// Classifies the edge between two already-computed resolutions.
inline EdgeTransition edge_transition(const Diagram& d, const Resolution& from,
                                      const Resolution& to, int flip) {
    EdgeTransition t;
    t.from = from.epsilon;
    t.to = to.epsilon;
    t.flip = flip;
    const auto& e = d.endpoint_indices(flip);
    std::vector<int> src, dst;
    for (int a : e) {
        src.push_back(from.circle_of_arc[a]);
        dst.push_back(to.circle_of_arc[a]);
    }
    std::sort(src.begin(), src.end());
    src.erase(std::unique(src.begin(), src.end()), src.end());
    std::sort(dst.begin(), dst.end());
    dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
    if (src.size() == 2 && dst.size() == 1) {
        t.kind = EdgeKind::Merge;
        t.from_circles = {src[0], src[1]};
        t.to_circles = {dst[0], -1};
    } else if (src.size() == 1 && dst.size() == 2) {
        t.kind = EdgeKind::Split;
        t.from_circles = {src[0], -1};
        t.to_circles = {dst[0], dst[1]};
    } else {
        throw ComplexError("cube edge is neither a merge nor a split");
    }
    t.unchanged.assign(from.circles.size(), -1);
    for (int c = 0; c < from.free_loop_base; ++c) {
        if (c == src[0] || (src.size() == 2 && c == src[1])) continue;
        t.unchanged[c] = to.circle_of_arc[d.arc_index(from.circles[c].front())];
    }
    for (int k = 0; k < d.free_loops(); ++k)
        t.unchanged[from.circle_of_free_loop(k)] = to.circle_of_free_loop(k);
    return t;
}

inline EdgeTransition edge_transition(const Diagram& d, Epsilon epsilon, int flip_index) {
    if (flip_index < 0 || flip_index >= d.crossing_count())
        throw InputError("flip index " + std::to_string(flip_index) + " out of range");
    if (epsilon[flip_index]) throw InputError("edge must flip a 0 coordinate to 1");
    return edge_transition(d, resolve(d, epsilon), resolve(d, epsilon.flipped(flip_index)),
                           flip_index);
}

}  // namespace khlab
