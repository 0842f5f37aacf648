#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "khlab/verify.hpp"

using namespace khlab;

namespace {

const CheckResult& check(const VerificationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST(VerifyPositiveBraid, Trefoil) {
    auto r = verify_positive_braid(parse_braid("1 1 1"));
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.is_knot);
    ASSERT_EQ(r.checks.size(), 5u);
    for (const auto& c : r.checks) EXPECT_EQ(c.status, CheckStatus::Pass) << c.name << ": " << c.details;
    EXPECT_NE(check(r, "h0_structure").details.find("(0,1)=Z, (0,3)=Z"), std::string::npos);
}

TEST(VerifyPositiveBraid, FigureOfThreeStrands) {
    auto r = verify_positive_braid(parse_braid("1 2 1 2"));
    EXPECT_TRUE(r.passed());
    EXPECT_NE(check(r, "h0_structure").details.find("expected (0,1)=Z, (0,3)=Z"), std::string::npos);
}

TEST(VerifyPositiveBraid, HopfLinkSkipsKnotOnlyCheck) {
    auto r = verify_positive_braid(parse_braid("1 1"));
    EXPECT_FALSE(r.is_knot);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(check(r, "negative_degree_vanishing").status, CheckStatus::Pass);
    EXPECT_EQ(check(r, "h1_vanishing").status, CheckStatus::Pass);
    EXPECT_EQ(check(r, "h0_structure").status, CheckStatus::Skipped);
    EXPECT_NE(check(r, "h0_structure").details.find("2 components"), std::string::npos);
}

TEST(VerifyPositiveBraid, RejectsNegativeLetters) {
    EXPECT_THROW(verify_positive_braid(parse_braid("1 -1")), NotPositiveError);
    EXPECT_THROW(kernel_structure_check(parse_braid("-1")), NotPositiveError);
    EXPECT_THROW(reduction_consistency(parse_braid("-1")), NotPositiveError);
}

TEST(KernelStructure, Examples) {
    auto k = kernel_structure_check(parse_braid("1 1 1"));
    EXPECT_TRUE(k.passed) << k.details;
    EXPECT_GT(k.kernel_rank, 0u);
    EXPECT_EQ(k.comparisons, 3 * k.kernel_rank);

    k = kernel_structure_check(parse_braid("1 1 2 2"));
    EXPECT_TRUE(k.passed) << k.details;

    k = kernel_structure_check(parse_braid("1 2"));
    EXPECT_TRUE(k.passed);
    EXPECT_EQ(k.comparisons, 0u);
}

TEST(KernelStructure, RandomPositiveWords) {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto w = fixtures::random_braid(rng, 8, 5, true);
        auto k = kernel_structure_check(w);
        EXPECT_TRUE(k.passed) << w.to_string() << ": " << k.details;
    }
}

TEST(ReductionConsistency, Examples) {
    auto r = reduction_consistency(parse_braid("1 1 1"));
    EXPECT_TRUE(r.passed) << r.details;
    EXPECT_EQ(r.reduced.to_string(), "p=2; 1");
    EXPECT_NE(r.details.find("dim C^0(D) = 4, dim C^0(D') = 4"), std::string::npos);

    r = reduction_consistency(parse_braid("p=4; 1 3 1 3"));
    EXPECT_TRUE(r.passed) << r.details;
    EXPECT_EQ(r.reduced.to_string(), "p=4; 1 3");

    r = reduction_consistency(parse_braid(""));
    EXPECT_TRUE(r.passed) << r.details;
    EXPECT_TRUE(r.reduced.empty());
}

TEST(RestrictedComplex, OneSummandPerGenerator) {
    auto w = parse_braid("1 2 1 2 1 2");
    auto c = build_complex(braid_closure(w));
    auto wc = restricted_complex(w, c);
    EXPECT_EQ(wc.summands, (std::vector<CrossingId>{{1, 1}, {2, 1}}));
    EXPECT_EQ(wc.dbar0.cols, 8u);
    EXPECT_EQ(wc.dbar0.rows, 8u);  // two copies of V^{(2)}
    EXPECT_TRUE(multiply(wc.dbar1, wc.dbar0).entries.empty());
    EXPECT_TRUE(homology_block(wc.dbar0, wc.dbar1).is_zero());
}

TEST(NonPositiveDiagramOfPositiveKnot, UnnormalizedHomologyStartsAtNMinus) {
    // sigma_1^3 with a cancelling pair appended: same knot, one negative crossing.
    auto d = braid_closure(parse_braid("1 1 1 1 -1"));
    ASSERT_EQ(d.n_minus(), 1);
    auto h = homology_table(d);
    for (const auto& [k, e] : h.unnormalized.entries()) EXPECT_GE(k.first, d.n_minus());
    EXPECT_EQ(h.normalized, homology_table(braid_closure(parse_braid("1 1 1"))).normalized);
}
