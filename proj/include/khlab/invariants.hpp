#pragma once

#include <vector>

#include "khlab/cube.hpp"
#include "khlab/diagram.hpp"
#include "khlab/homology.hpp"
#include "khlab/polynomial.hpp"

namespace khlab {

/// sum_{i,j} (-1)^{i - n-} dim C^{i,j} q^j over the normalized grading.
inline LaurentPolynomial graded_euler_characteristic(const ChainComplex& c) {
    LaurentPolynomial chi;
    for (const auto& col : c.columns()) {
        const int sign = (col.degree - c.n_minus()) % 2 == 0 ? 1 : -1;
        for (const auto& [q, dim] : col.q_dimensions())
            chi.add_term(q, sign * static_cast<std::int64_t>(dim));
    }
    return chi;
}

/// sum_{i,j} (-1)^i rank H^{i,j} q^j of a (normalized) homology table.
inline LaurentPolynomial homology_euler_characteristic(const BigradedGroup& h) {
    LaurentPolynomial chi;
    for (const auto& [k, e] : h.entries())
        chi.add_term(k.second, (k.first % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(e.free_rank));
    return chi;
}

/// Unnormalized Jones polynomial as the state sum
///   sum_eps (-1)^{|eps| + n-} q^{|eps| + n+ - 2n-} (q + q^{-1})^{c(eps)},
/// computed from circle counts alone.
inline LaurentPolynomial jones_state_sum(const Diagram& d, int crossing_cap = kDefaultCrossingCap) {
    check_crossing_cap(d, crossing_cap);
    const int m = d.crossing_count();
    const auto loop = LaurentPolynomial::monomial(1, 1) + LaurentPolynomial::monomial(1, -1);
    std::vector<LaurentPolynomial> loop_powers{LaurentPolynomial::monomial(1, 0)};
    LaurentPolynomial sum;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
        const Epsilon e{bits, m};
        const int circles = resolve(d, e).circle_count();
        while (static_cast<int>(loop_powers.size()) <= circles) loop_powers.push_back(loop_powers.back() * loop);
        const int w = e.weight();
        const int sign = (w + d.n_minus()) % 2 == 0 ? 1 : -1;
        sum += loop_powers[circles] * LaurentPolynomial::monomial(sign, w + d.n_plus() - 2 * d.n_minus());
    }
    return sum;
}

/// Switches to the convention with deg 1 = -1, deg X = +1 and negated
/// shifts: every q-degree j becomes -j. An involution.
inline BigradedGroup convention_toggle(const BigradedGroup& t) { return t.q_negated(); }

}  // namespace khlab
