// Acceptance runner: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "khlab/khlab.hpp"
#include "oracle.hpp"

using namespace khlab;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string describe(const BigradedGroup& h) {
    std::string s;
    for (const auto& [k, e] : h.entries()) s += (s.empty() ? "" : ", ") + detail::format_entry(k.first, k.second, e);
    return "{" + s + "}";
}

BigradedGroup table(const BraidWord& w) { return homology_table(braid_closure(w)).normalized; }

std::vector<BraidWord> corpus() {
    std::vector<BraidWord> out;
    for (const auto& s : fixtures::positive_corpus()) out.push_back(parse_braid(s));
    return out;
}

/// Table built from the brute-force oracle; torsion must be fully resolved by minors.
BigradedGroup oracle_table(const BraidWord& w, Outcome& o) {
    const oracle::BraidComplex ref(w.strands(), fixtures::to_oracle(w));
    BigradedGroup out;
    for (const auto& [k, g] : ref.homology()) {
        if (!g.torsion_known) o.fail("oracle could not resolve torsion at (" + std::to_string(k.first) + "," +
                                     std::to_string(k.second) + ")");
        out.set(k.first, k.second,
                {static_cast<std::size_t>(g.free_rank), std::vector<BigInt>(g.torsion.begin(), g.torsion.end())});
    }
    return out;
}

Outcome ac1() {
    Outcome o;
    const auto w = parse_braid("1 1 1");
    BigradedGroup frozen;
    frozen.set(0, 1, {1, {}});
    frozen.set(0, 3, {1, {}});
    frozen.set(2, 5, {1, {}});
    frozen.set(3, 9, {1, {}});
    frozen.set(3, 7, {0, {2}});
    const auto derived = oracle_table(w, o);
    if (derived != frozen) o.fail("oracle table " + describe(derived) + " differs from frozen table");
    const auto start = Clock::now();
    const auto h = table(w);
    const double t = seconds_since(start);
    if (h != frozen) o.fail("engine table " + describe(h));
    if (t >= 1.0) o.fail("took " + std::to_string(t) + " s");
    if (o.ok) o.detail = describe(h) + " in " + std::to_string(t * 1000) + " ms";
    return o;
}

Outcome ac2() {
    Outcome o;
    const auto start = Clock::now();
    for (const auto& w : corpus()) {
        const auto row = table(w).row(1);
        if (!row.empty()) o.fail(w.to_string() + ": H^1 = " + detail::format_row(1, row));
    }
    const double t = seconds_since(start);
    if (t >= 120) o.fail("took " + std::to_string(t) + " s");
    if (o.ok) o.detail = std::to_string(corpus().size()) + " words, " + std::to_string(t) + " s";
    return o;
}

Outcome ac3() {
    Outcome o;
    int knots = 0;
    for (const auto& w : corpus()) {
        if (braid_permutation(w).component_count() != 1) continue;
        ++knots;
        const int n = static_cast<int>(w.size()), p = w.strands();
        std::map<int, HomologyEntry> expected{{1 - p + n - 1, {1, {}}}, {1 - p + n + 1, {1, {}}}};
        const auto row = table(w).row(0);
        if (row != expected) o.fail(w.to_string() + ": H^0 = " + detail::format_row(0, row));
    }
    if (o.ok) o.detail = std::to_string(knots) + " knots checked";
    return o;
}

Outcome ac4() {
    Outcome o;
    for (const auto& w : corpus())
        for (const auto& [k, e] : table(w).entries())
            if (k.first < 0) o.fail(w.to_string() + ": " + detail::format_entry(k.first, k.second, e));
    if (o.ok) o.detail = "no entries at i<0";
    return o;
}

Outcome ac5() {
    Outcome o;
    const auto start = Clock::now();
    std::vector<BraidWord> words = corpus();
    std::mt19937 rng(5);
    for (int k = 0; k < 50; ++k) words.push_back(fixtures::random_braid(rng, 10, 5));
    for (const auto& w : words) {
        const auto d = braid_closure(w);
        const auto chi = graded_euler_characteristic(build_complex(d));
        const auto jones = jones_state_sum(d);
        if (chi != jones) o.fail(w.to_string() + ": " + chi.to_string() + " vs " + jones.to_string());
    }
    const double t = seconds_since(start);
    if (t >= 120) o.fail("took " + std::to_string(t) + " s");
    if (o.ok) o.detail = std::to_string(words.size()) + " diagrams, " + std::to_string(t) + " s";
    return o;
}

Outcome ac6() {
    Outcome o;
    auto same = [&](const BraidWord& a, const BraidWord& b, const std::string& tag) {
        if (table(a) != table(b)) o.fail(tag + ": " + a.to_string() + " vs " + b.to_string());
    };
    same(parse_braid("1 1 1"), parse_braid("1 2 1 2"), "(a)");
    std::mt19937 rng(6);
    int checks = 1;
    for (const auto& w : corpus()) {
        std::uniform_int_distribution<int> gen(1, w.strands() - 1);
        std::bernoulli_distribution neg(0.5);
        same(w, fixtures::conjugate(w, gen(rng), neg(rng) ? -1 : 1), "(b)");
        same(w, fixtures::stabilize(w), "(c)");
        checks += 2;
    }
    same(parse_braid("1 2 1"), parse_braid("2 1 2"), "(d)");
    if (o.ok) o.detail = std::to_string(checks + 1) + " pairs identical";
    return o;
}

Outcome ac7() {
    Outcome o;
    std::mt19937 rng(7);
    std::size_t squares = 0;
    for (int trial = 0; trial < 100 && o.ok; ++trial) {
        const auto w = fixtures::random_braid(rng, 10, 5);
        const auto d = braid_closure(w);
        const int m = d.crossing_count();
        const std::string tag = w.to_string() + ": ";
        const auto c = build_complex(d);
        for (int i = 0; i + 1 < m; ++i)
            if (!multiply(c.differential(i + 1).matrix, c.differential(i).matrix).entries.empty())
                o.fail(tag + "d*d != 0 at degree " + std::to_string(i));
        for (const auto& g : c.differentials())
            for (const auto& e : g.matrix.entries)
                if (g.row_q[e.row] != g.col_q[e.col]) o.fail(tag + "entry changes q-degree");

        const std::uint64_t vertices = std::uint64_t{1} << m;
        std::vector<Resolution> res;
        for (std::uint64_t b = 0; b < vertices; ++b) res.push_back(resolve(d, Epsilon{b, m}));
        std::map<std::pair<std::uint64_t, int>, EdgeTransition> edges;
        for (std::uint64_t b = 0; b < vertices; ++b)
            for (int k = 0; k < m; ++k) {
                if ((b >> k) & 1) continue;
                const auto t = edge_transition(d, res[b], res[b | (std::uint64_t{1} << k)], k);
                const int delta = res[b | (std::uint64_t{1} << k)].circle_count() - res[b].circle_count();
                if (delta != (t.kind == EdgeKind::Merge ? -1 : 1)) o.fail(tag + "edge changes circle count by " +
                                                                           std::to_string(delta));
                edges.emplace(std::pair(b, k), t);
            }
        auto path = [&](std::uint64_t b, std::uint64_t src, int first, int second, std::map<std::uint64_t, int>& acc) {
            const Epsilon e{b, m};
            const auto mid = e.flipped(first);
            const int sign = (e.ones_before(first) + mid.ones_before(second)) % 2 ? -1 : 1;
            std::array<detail::EdgeImage, 2> x, y;
            const int nx = detail::edge_images(edges.at({b, first}), src, x);
            for (int p = 0; p < nx; ++p) {
                const int ny = detail::edge_images(edges.at({mid.bits, second}), x[p].index, y);
                for (int q = 0; q < ny; ++q) acc[y[q].index] += sign * x[p].coefficient * y[q].coefficient;
            }
        };
        for (std::uint64_t b = 0; b < vertices; ++b) {
            const std::uint64_t states = std::uint64_t{1} << res[b].circle_count();
            for (int a = 0; a < m; ++a)
                for (int k = a + 1; k < m; ++k) {
                    if (((b >> a) & 1) || ((b >> k) & 1)) continue;
                    ++squares;
                    for (std::uint64_t s = 0; s < states; ++s) {
                        std::map<std::uint64_t, int> acc;
                        path(b, s, a, k, acc);
                        path(b, s, k, a, acc);
                        for (const auto& [idx, v] : acc)
                            if (v != 0) o.fail(tag + "square does not anticommute at vertex " + std::to_string(b));
                    }
                }
        }
    }
    if (o.ok) o.detail = "100 diagrams, " + std::to_string(squares) + " squares";
    return o;
}

Outcome ac8() {
    Outcome o;
    for (const auto& w : corpus()) {
        const auto k = kernel_structure_check(w);
        if (!k.passed) o.fail(w.to_string() + " kernel: " + k.details);
        const auto r = reduction_consistency(w);
        if (!r.passed) o.fail(w.to_string() + " reduction: " + r.details);
    }
    if (o.ok) o.detail = std::to_string(corpus().size()) + " words";
    return o;
}

Outcome ac9() {
    Outcome o;
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto w = fixtures::random_braid(rng, 10, 5);
        const auto d = braid_closure(w);
        std::vector<int> order(d.crossing_count());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        if (homology_table(d).normalized != homology_table(d.reordered(order)).normalized)
            o.fail(w.to_string() + ": table depends on crossing order");
    }
    if (o.ok) o.detail = "20 diagrams";
    return o;
}

Outcome ac10() {
    Outcome o;
    const auto w = parse_braid("1 2 1 2 1 2 1 2 1 2 1 2");
    const auto d = braid_closure(w);
    const auto start = Clock::now();
    const auto h = homology_table(d).normalized;
    const double t = seconds_since(start);
    if (t >= 300) o.fail("took " + std::to_string(t) + " s");
    if (h.empty()) o.fail("empty table");
    try {
        homology_table(d, {11});
        o.fail("cap 11 did not raise");
    } catch (const ResourceError&) {
    }
    if (o.ok) o.detail = std::to_string(h.size()) + " nonzero groups in " + std::to_string(t) + " s; cap enforced";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1 trefoil table", ac1},
        {"AC2 H^1 vanishes on positive corpus", ac2},
        {"AC3 H^0 structure", ac3},
        {"AC4 no homology at i<0", ac4},
        {"AC5 Euler characteristic equals state sum", ac5},
        {"AC6 invariance spot checks", ac6},
        {"AC7 complex well-formedness", ac7},
        {"AC8 kernel and reduction checks", ac8},
        {"AC9 crossing order independence", ac9},
        {"AC10 performance envelope", ac10},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        if (!o.ok) ++failures;
        std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
