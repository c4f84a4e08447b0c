#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "ascwave/bounds.hpp"
#include "ascwave/solver.hpp"
#include "oracles.hpp"

using namespace ascwave;

namespace {

/// AW(k;r) by checking every r-coloring of [1,n] for n = 1, 2, ...
position_t aw_by_enumeration(int k, int r) {
    for (int n = 1;; ++n) {
        bool all_contain = true;
        oracle::for_each_coloring(n, r, [&](const std::vector<int>& colors) {
            if (all_contain && oracle::longest_pair_dp(colors) < k) all_contain = false;
        });
        if (all_contain) return n;
    }
}

/// Delta^m(k;r) over every coloring, no symmetry reduction.
position_t delta_by_enumeration(int k, int r, int m) {
    position_t best = 0;
    oracle::for_each_coloring(m, r, [&](const std::vector<int>& colors) {
        const auto d = oracle::min_last_difference_by_subsets(colors, k);
        EXPECT_TRUE(d.has_value());
        if (d) best = std::max(best, *d);
    });
    return best;
}

} // namespace

TEST(ExactAw, PinnedValues) {
    EXPECT_EQ(exact_aw(3, 2).aw_value, 7);
    EXPECT_EQ(exact_aw(4, 2).aw_value, 13);
    EXPECT_EQ(exact_aw(5, 2).aw_value, 21);
    EXPECT_EQ(exact_aw(3, 3).aw_value, 11);
    EXPECT_EQ(exact_aw(4, 3).aw_value, 23);
    EXPECT_EQ(exact_aw(2, 3).aw_value, 4);
}

TEST(ExactAw, TrivialFamilies) {
    for (int k = 1; k <= 10; ++k) EXPECT_EQ(exact_aw(k, 1).aw_value, k) << "k=" << k;
    for (int r = 1; r <= 5; ++r) EXPECT_EQ(exact_aw(2, r).aw_value, r + 1) << "r=" << r;
    EXPECT_FALSE(exact_aw(1, 3).extremal.has_value());
}

TEST(ExactAw, MatchesPlainEnumeration) {
    for (auto [k, r] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}, {2, 4}, {5, 1}}) {
        EXPECT_EQ(exact_aw(k, r).aw_value, aw_by_enumeration(k, r)) << "k=" << k << " r=" << r;
    }
}

TEST(ExactAw, CanonicalAgreesWithUnrestricted) {
    for (auto [k, r] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {3, 3}}) {
        SearchOptions plain;
        plain.canonical = false;
        const auto a = exact_aw(k, r);
        const auto b = exact_aw(k, r, plain);
        EXPECT_EQ(a.aw_value, b.aw_value);
        EXPECT_GE(b.nodes_explored, a.nodes_explored);
    }
}

TEST(ExactAw, ExtremalCertificate) {
    const auto res = exact_aw(3, 2);
    ASSERT_TRUE(res.extremal.has_value());
    EXPECT_EQ(res.extremal->n(), 6);
    EXPECT_EQ(res.extremal->coloring(), Coloring(2, {0, 1, 0, 0, 1, 1}));
    EXPECT_TRUE(verify_avoidance(res.extremal->coloring(), 3));
    EXPECT_EQ(res.lower_bound(), 7);
    EXPECT_THROW(AvoidanceCertificate(Coloring(2, {0, 0, 0}), 3), verification_failure);
}

TEST(ExactAw, ThreadCountDoesNotChangeResult) {
    for (auto [k, r] : std::vector<std::pair<int, int>>{{5, 2}, {4, 3}, {6, 2}}) {
        const auto serial = exact_aw(k, r);
        for (unsigned threads : {2u, 3u, 8u}) {
            SearchOptions opts;
            opts.threads = threads;
            const auto par = exact_aw(k, r, opts);
            EXPECT_EQ(par.aw_value, serial.aw_value);
            ASSERT_TRUE(par.extremal && serial.extremal);
            EXPECT_EQ(par.extremal->coloring(), serial.extremal->coloring());
        }
    }
}

TEST(ExactAw, BudgetExhaustionIsExplicit) {
    SearchOptions opts;
    opts.node_budget = 50;
    const auto res = exact_aw(6, 2, opts);
    EXPECT_EQ(res.status, SearchStatus::budget_exceeded);
    EXPECT_FALSE(res.aw_value.has_value());
    EXPECT_LE(res.nodes_explored, 50u);
    if (res.extremal) {
        EXPECT_TRUE(verify_avoidance(res.extremal->coloring(), 6));
    }
    EXPECT_LE(res.lower_bound(), *exact_aw(6, 2).aw_value);
}

TEST(ExactAw, WithinBracket) {
    const BoundTable t(7, 2);
    for (int k = 2; k <= 7; ++k) {
        const auto aw = *exact_aw(k, 2).aw_value;
        EXPECT_GE(aw, k * k - k + 1);
        EXPECT_LE(bigint(aw), t.M(k, 2));
        EXPECT_LE(bigint(aw), simple_upper(k, 2));
    }
}

TEST(DeltaExact, Examples) {
    EXPECT_EQ(delta_exact(2, 2, 3), 2);
    EXPECT_EQ(delta_exact(2, 3, 4), 3);
    EXPECT_EQ(delta_exact(3, 2, 7), 3);
    EXPECT_THROW(delta_exact(3, 2, 6), invalid_input);
}

TEST(DeltaExact, MatchesUnreducedEnumeration) {
    for (auto [k, r, m] : std::vector<std::tuple<int, int, int>>{{2, 2, 3}, {2, 2, 6}, {3, 2, 7}, {3, 2, 9},
                                                                  {2, 3, 4}, {2, 3, 7}, {3, 3, 11}, {4, 2, 13}}) {
        EXPECT_EQ(delta_exact(k, r, m), delta_by_enumeration(k, r, m)) << k << "," << r << "," << m;
    }
}

TEST(DeltaExact, BoundedByRecursionIterate) {
    const BoundTable t(5, 3);
    for (auto [k, r] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}, {5, 1}}) {
        const auto m = static_cast<position_t>(t.M(k, r));
        EXPECT_LE(bigint(delta_exact(k, r, m)), t.D(k, r)) << k << "," << r;
    }
}

TEST(Greedy, OneColor) {
    for (int k = 1; k <= 8; ++k) {
        const auto w = greedy_find(Coloring(1, std::vector<int>(static_cast<std::size_t>(k), 0)), k);
        std::vector<position_t> want(static_cast<std::size_t>(k));
        std::iota(want.begin(), want.end(), 1);
        EXPECT_EQ(w.positions, want);
    }
}

TEST(Greedy, RejectsShortColorings) {
    EXPECT_THROW(greedy_find(Coloring(2, std::vector<int>(13, 0)), 4), invalid_input);
}

TEST(Greedy, AllColoringsAtThreshold) {
    for (auto [k, r] : std::vector<std::pair<int, int>>{{3, 2}, {2, 3}, {3, 3}}) {
        const auto m = static_cast<int>(m_table(k, r).M(k, r));
        oracle::for_each_coloring(m, r, [&](const std::vector<int>& colors) {
            const Coloring c(r, colors);
            const auto w = greedy_find(c, k);
            ASSERT_EQ(static_cast<int>(w.size()), k);
            ASSERT_TRUE(certificate_holds(w, c)) << oracle::show(colors);
        });
    }
}

TEST(Greedy, RandomLongColorings) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 3);
        const int k = 2 + static_cast<int>(rng() % 4);
        const auto m = static_cast<int>(m_table(k, r).M(k, r));
        std::vector<int> colors(static_cast<std::size_t>(m + static_cast<int>(rng() % 20)));
        for (auto& c : colors) c = static_cast<int>(rng() % static_cast<unsigned>(r));
        const Coloring c(r, colors);
        const auto w = greedy_find(c, k);
        ASSERT_EQ(static_cast<int>(w.size()), k);
        ASSERT_TRUE(certificate_holds(w, c));
    }
}
