#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "khlab/braid.hpp"
#include "khlab/cube.hpp"
#include "khlab/homology.hpp"
#include "khlab/smith.hpp"

namespace khlab {

enum class CheckStatus { Pass, Fail, Skipped };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string details;
};

struct VerificationReport {
    BraidWord input;
    int crossings = 0;
    int components = 0;
    bool is_knot = false;
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::none_of(checks.begin(), checks.end(),
                            [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
    }
};

/// W = (+) V_(i,1) over the generators used, with the projection of d^0 onto
/// W and the restriction of d^1 to W, landing in (+)_{i<j} V_(i1),(j1).
struct RestrictedComplexW {
    std::vector<CrossingId> summands;
    SparseMatrix dbar0;
    SparseMatrix dbar1;
};

struct KernelCheckResult {
    bool passed = true;
    std::size_t kernel_rank = 0;
    std::size_t comparisons = 0;
    std::string details;
    std::optional<std::vector<BigInt>> witness;  // violating kernel vector
};

struct ReductionCheckResult {
    bool passed = true;
    BraidWord reduced;
    std::string details;
};

namespace detail {

inline void require_positive(const BraidWord& w) {
    if (!w.is_positive()) throw NotPositiveError("verifier requires a positive braid word: " + w.to_string());
}

inline std::string format_entry(int i, int j, const HomologyEntry& e) {
    std::ostringstream out;
    out << "(" << i << "," << j << ")=";
    bool any = false;
    if (e.free_rank) {
        out << "Z";
        if (e.free_rank > 1) out << "^" << e.free_rank;
        any = true;
    }
    for (const auto& t : e.torsion) {
        out << (any ? "+" : "") << "Z/" << t;
        any = true;
    }
    if (!any) out << "0";
    return out.str();
}

inline std::string format_row(int i, const std::map<int, HomologyEntry>& row) {
    if (row.empty()) return "none";
    std::string s;
    for (const auto& [j, e] : row) s += (s.empty() ? "" : ", ") + format_entry(i, j, e);
    return s;
}

/// Range of q-degrees present anywhere in the complex, for reporting which
/// (i, j) cells a check inspected.
inline std::pair<int, int> q_range(const ChainComplex& c) {
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& col : c.columns())
        for (int q : col.q_degrees) {
            lo = first ? q : std::min(lo, q);
            hi = first ? q : std::max(hi, q);
            first = false;
        }
    return {lo, hi};
}

/// Circle index, in resolution r, of the circle through braid strand
/// position `pos` (0-based).
inline int circle_of_strand(const Diagram& d, const Resolution& r, int pos) {
    const auto& a = d.strand_anchors().at(pos);
    return a.free_loop ? r.circle_of_free_loop(a.id) : r.circle_of_arc[d.arc_index(a.id)];
}

/// Maps factor k of V^{(p-1)} (0-based) to a circle of the resolution where
/// only a sigma_i crossing is 1-smoothed: factors before i go to strands
/// 1..i-1, factor i to the E_i circle, later factors to strands i+2..p.
inline std::vector<int> single_smoothing_factors(const Diagram& d, const Resolution& r, int generator,
                                                 int strands) {
    std::vector<int> out;
    for (int k = 1; k <= strands - 1; ++k) {
        const int strand = k <= generator ? k : k + 1;  // 1-based
        out.push_back(circle_of_strand(d, r, strand - 1));
    }
    return out;
}

/// Column-1 basis index of the state on V_(crossing) with factor labels
/// given by `factor_index` (factor 0 most significant, bit set = X).
inline std::size_t factor_basis_index(const CubeColumn& c1, std::size_t res, const std::vector<int>& factors,
                                      std::uint64_t factor_index) {
    const int n = c1.resolutions[res].circle_count();
    const int f = static_cast<int>(factors.size());
    std::uint64_t local = 0;
    for (int k = 0; k < f; ++k)
        if (factor_index & (std::uint64_t{1} << (f - 1 - k))) local |= label_bit(n, factors[k]);
    return c1.offsets[res] + local;
}

/// Integer kernel of a graded map, computed block by block in q-degree and
/// returned in global column coordinates.
inline std::vector<std::vector<BigInt>> graded_kernel_basis(const GradedMatrix& g) {
    std::map<int, std::vector<std::size_t>> cols_of_q;
    for (std::size_t c = 0; c < g.col_q.size(); ++c) cols_of_q[g.col_q[c]].push_back(c);
    std::vector<std::vector<BigInt>> out;
    for (const auto& [q, block] : g.q_blocks()) {
        const auto& cols = cols_of_q[q];
        for (const auto& local : integer_kernel_basis(block)) {
            std::vector<BigInt> v(g.cols());
            for (std::size_t k = 0; k < local.size(); ++k) v[cols[k]] = local[k];
            out.push_back(std::move(v));
        }
    }
    return out;
}

inline SparseMatrix submatrix(const SparseMatrix& m, const std::vector<std::int64_t>& row_map,
                              std::size_t rows, const std::vector<std::int64_t>& col_map, std::size_t cols) {
    SparseMatrix out;
    out.rows = rows;
    out.cols = cols;
    for (const auto& e : m.entries)
        if (row_map[e.row] >= 0 && col_map[e.col] >= 0)
            out.entries.push_back({static_cast<std::size_t>(row_map[e.row]),
                                   static_cast<std::size_t>(col_map[e.col]), e.value});
    return out;
}

}  // namespace detail

/// Builds W, d-bar^0 and d-bar^1 from the complex of the closure of w
/// (which must list crossings in (i, alpha) order, as braid_closure does).
inline RestrictedComplexW restricted_complex(const BraidWord& w, const ChainComplex& c) {
    detail::require_positive(w);
    RestrictedComplexW out;
    const auto cls = classify_crossings(w);
    const int m = static_cast<int>(w.size());
    std::vector<int> first_rank;  // crossing index of (i,1) per used generator
    for (int r = 0; r < m; ++r)
        if (cls.ordered[r].occurrence == 1) {
            out.summands.push_back(cls.ordered[r]);
            first_rank.push_back(r);
        }
    if (m == 0) return out;

    const auto& c1 = c.column(1);
    std::vector<std::int64_t> w_index(c1.dimension(), -1);
    std::size_t w_dim = 0;
    for (int r : first_rank) {
        const auto res = *c1.find(Epsilon{std::uint64_t{1} << r, m});
        const std::uint64_t block = std::uint64_t{1} << c1.resolutions[res].circle_count();
        for (std::uint64_t b = 0; b < block; ++b) w_index[c1.offsets[res] + b] = static_cast<std::int64_t>(w_dim++);
    }
    std::vector<std::int64_t> all0(c.dimension(0));
    for (std::size_t k = 0; k < all0.size(); ++k) all0[k] = static_cast<std::int64_t>(k);
    out.dbar0 = detail::submatrix(c.differential(0).matrix, w_index, w_dim, all0, all0.size());

    if (m >= 2) {
        const auto& c2 = c.column(2);
        std::vector<std::int64_t> pair_index(c2.dimension(), -1);
        std::size_t pair_dim = 0;
        for (std::size_t a = 0; a < first_rank.size(); ++a)
            for (std::size_t b = a + 1; b < first_rank.size(); ++b) {
                const std::uint64_t bits = (std::uint64_t{1} << first_rank[a]) | (std::uint64_t{1} << first_rank[b]);
                const auto res = *c2.find(Epsilon{bits, m});
                const std::uint64_t block = std::uint64_t{1} << c2.resolutions[res].circle_count();
                for (std::uint64_t k = 0; k < block; ++k)
                    pair_index[c2.offsets[res] + k] = static_cast<std::int64_t>(pair_dim++);
            }
        out.dbar1 = detail::submatrix(c.differential(1).matrix, pair_index, pair_dim, w_index, w_dim);
    } else {
        out.dbar1.cols = w_dim;
    }
    return out;
}

/// Every integer kernel vector t' of d^1 must have t_(i,alpha) = t_(i,beta)
/// once both summands are identified with V^{(p-1)} factorwise.
inline KernelCheckResult kernel_structure_check(const BraidWord& w, BuildOptions options = {}) {
    detail::require_positive(w);
    KernelCheckResult out;
    const auto d = braid_closure(w);
    check_crossing_cap(d, options.crossing_cap);
    const int m = d.crossing_count();
    if (m == 0) {
        out.details = "no crossings; C^1 = 0";
        return out;
    }
    const auto c0 = build_column(d, 0);
    const auto c1 = build_column(d, 1);
    const auto c2 = build_column(d, 2);
    const auto d1 = build_differential(d, c1, c2);
    const auto kernel = detail::graded_kernel_basis(d1);
    out.kernel_rank = kernel.size();

    const auto cls = classify_crossings(w);
    const int p = w.strands();
    struct Summand {
        CrossingId id;
        std::size_t res;
        std::vector<int> factors;
    };
    std::vector<Summand> summands;
    for (int r = 0; r < m; ++r) {
        const auto res = *c1.find(Epsilon{std::uint64_t{1} << r, m});
        summands.push_back({cls.ordered[r], res,
                            detail::single_smoothing_factors(d, c1.resolutions[res], cls.ordered[r].generator, p)});
    }
    const std::uint64_t factor_states = std::uint64_t{1} << (p - 1);
    for (const auto& v : kernel) {
        for (std::size_t a = 0; a < summands.size(); ++a)
            for (std::size_t b = a + 1; b < summands.size(); ++b) {
                if (summands[a].id.generator != summands[b].id.generator) continue;
                ++out.comparisons;
                for (std::uint64_t f = 0; f < factor_states; ++f) {
                    const auto ia = detail::factor_basis_index(c1, summands[a].res, summands[a].factors, f);
                    const auto ib = detail::factor_basis_index(c1, summands[b].res, summands[b].factors, f);
                    if (v[ia] != v[ib]) {
                        out.passed = false;
                        std::ostringstream msg;
                        msg << "kernel vector differs on V_(" << summands[a].id.generator << ","
                            << summands[a].id.occurrence << ") vs V_(" << summands[b].id.generator << ","
                            << summands[b].id.occurrence << ") at factor state " << f << ": " << v[ia]
                            << " != " << v[ib];
                        out.details = msg.str();
                        out.witness = v;
                        return out;
                    }
                }
            }
    }
    std::ostringstream msg;
    msg << "ker d^1 has rank " << out.kernel_rank << " (C^1 dim " << c1.dimension() << ", C^0 dim "
        << c0.dimension() << "); " << out.comparisons << " summand pairs per vector agree";
    out.details = msg.str();
    return out;
}

/// Checks the reduction to D' = closure of the one-letter-per-generator
/// word: H^1(D') = 0, dim C^0(D') = dim C^0(D) = 2^p, and the restricted
/// complex C^0 -> W -> (+) V_(i1),(j1) of D is exact at W with the same
/// ranks as the differentials of D'.
inline ReductionCheckResult reduction_consistency(const BraidWord& w, BuildOptions options = {}) {
    detail::require_positive(w);
    ReductionCheckResult out;
    out.reduced = reduced_diagram(w);
    const auto d = braid_closure(w);
    const auto d_red = braid_closure(out.reduced);
    check_crossing_cap(d, options.crossing_cap);
    const auto complex = build_complex(d, options);
    const auto complex_red = build_complex(d_red, options);
    const auto h_red = homology_table(complex_red);

    std::ostringstream msg;
    msg << "D' = " << out.reduced.to_string() << "; ";
    const auto h1 = h_red.normalized.row(1);
    if (!h1.empty()) out.passed = false;
    msg << "H^1(D') " << (h1.empty() ? "= 0" : "!= 0: " + detail::format_row(1, h1)) << "; ";

    const std::size_t expected = std::size_t{1} << w.strands();
    const bool dims_ok = complex.dimension(0) == expected && complex_red.dimension(0) == expected;
    if (!dims_ok) out.passed = false;
    msg << "dim C^0(D) = " << complex.dimension(0) << ", dim C^0(D') = " << complex_red.dimension(0)
        << " (2^p = " << expected << ")";

    if (d.crossing_count() > 0) {
        const auto wc = restricted_complex(w, complex);
        try {
            const auto at_w = homology_block(wc.dbar0, wc.dbar1);
            const auto rank0 = integer_rank(wc.dbar0), rank1 = integer_rank(wc.dbar1);
            const auto red0 = integer_rank(complex_red.differential(0).matrix);
            const auto red1 = complex_red.crossing_count() >= 2 ? integer_rank(complex_red.differential(1).matrix)
                                                                : std::size_t{0};
            const bool exact = at_w.is_zero();
            const bool ranks_match = rank0 == red0 && rank1 == red1;
            if (!exact || !ranks_match) out.passed = false;
            msg << "; W dim " << wc.dbar0.rows << ", rank dbar0 = " << rank0 << " (D': " << red0
                << "), rank dbar1 = " << rank1 << " (D': " << red1 << "), "
                << (exact ? "exact at W" : "NOT exact at W");
        } catch (const ComplexError& e) {
            out.passed = false;
            msg << "; restricted complex malformed: " << e.what();
        }
    } else {
        msg << "; no crossings, W = 0";
    }
    out.details = msg.str();
    return out;
}

/// Runs every check on a positive braid word.
inline VerificationReport verify_positive_braid(const BraidWord& w, BuildOptions options = {}) {
    detail::require_positive(w);
    VerificationReport report;
    report.input = w;
    report.crossings = static_cast<int>(w.size());
    report.components = braid_permutation(w).component_count();
    report.is_knot = report.components == 1;

    const auto d = braid_closure(w);
    const auto complex = build_complex(d, options);
    const auto h = homology_table(complex).normalized;
    const auto [qlo, qhi] = detail::q_range(complex);
    const std::string span = "j in [" + std::to_string(qlo) + "," + std::to_string(qhi) + "]";

    {
        CheckResult c{"negative_degree_vanishing", CheckStatus::Pass, ""};
        std::string found;
        for (const auto& [k, e] : h.entries())
            if (k.first < 0) found += (found.empty() ? "" : ", ") + detail::format_entry(k.first, k.second, e);
        if (!found.empty()) c.status = CheckStatus::Fail;
        c.details = "inspected (i,j) for i<0, " + span + ": " + (found.empty() ? "all zero" : found);
        report.checks.push_back(c);
    }
    {
        CheckResult c{"h0_structure", CheckStatus::Pass, ""};
        const auto row = h.row(0);
        if (!report.is_knot) {
            c.status = CheckStatus::Skipped;
            c.details = std::to_string(report.components) + " components; H^0 row: " + detail::format_row(0, row);
        } else {
            const int n = d.crossing_count(), p = w.strands();
            const int lo = 1 - p + n - 1, hi = 1 - p + n + 1;
            std::map<int, HomologyEntry> expected{{lo, {1, {}}}, {hi, {1, {}}}};
            if (row != expected) c.status = CheckStatus::Fail;
            c.details = "expected (0," + std::to_string(lo) + ")=Z, (0," + std::to_string(hi) +
                        ")=Z from 1-p+n(D)+-1 with p=" + std::to_string(p) + ", n(D)=" + std::to_string(n) +
                        "; found " + detail::format_row(0, row);
        }
        report.checks.push_back(c);
    }
    {
        CheckResult c{"h1_vanishing", CheckStatus::Pass, ""};
        const auto row = h.row(1);
        if (!row.empty()) c.status = CheckStatus::Fail;
        c.details = "inspected (1,j) for " + span + ", torsion included: " +
                    (row.empty() ? "all zero" : detail::format_row(1, row));
        report.checks.push_back(c);
    }
    {
        const auto k = kernel_structure_check(w, options);
        report.checks.push_back({"kernel_structure", k.passed ? CheckStatus::Pass : CheckStatus::Fail,
                                 "entries (1,j) of C^1: " + k.details});
    }
    {
        const auto r = reduction_consistency(w, options);
        report.checks.push_back({"reduction_consistency", r.passed ? CheckStatus::Pass : CheckStatus::Fail,
                                 "entries (1,j) of D': " + r.details});
    }
    return report;
}

}  // namespace khlab
