#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "support.hpp"
#include "treejudge/cli.hpp"
#include "treejudge/errors.hpp"
#include "treejudge/metrics.hpp"

using namespace treejudge;

namespace {

// Six models: tree-based scores and win rates, same model order.
const std::vector<double> kTreeScores{3.48, 2.67, 2.50, 2.19, 1.61, 1.10};
const std::vector<double> kWinRates{27.19, 17.43, 14.72, 10.99, 12.71, 12.03};

/// Independent tau-a/b for tie-free data: (concordant - discordant) / pairs.
double pair_count_tau(const std::vector<double>& x, const std::vector<double>& y) {
    int c = 0, d = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) ((x[i] - x[j]) * (y[i] - y[j]) > 0 ? c : d) += 1;
    return static_cast<double>(c - d) / (c + d);
}

double skill_of(const std::string& name) { return std::stod(name.substr(name.find(':') + 1)); }

/// Session runner over synthetic agents named "skill:<x>".
SessionRunner synthetic_runner(int* sessions = nullptr) {
    return [sessions](const std::string& a, const std::string& b) {
        if (sessions) ++*sessions;
        tjtest::SyntheticRig rig(skill_of(a), skill_of(b), 0.1);
        auto config = tjtest::small_config({"Networks", "Storage", "Databases"});
        return run_session(a, b, rig.view(), config, TemplateSet::builtin()).score.a;
    };
}

}  // namespace

TEST(Ranks, AverageRanksShareTies) {
    const std::vector<double> v{10, 20, 20, 5};
    EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Correlation, SixModelColumns) {
    // Ranks (ascending) differ only for three models: d = {0,0,0,2,-1,-1}, sum d^2 = 6.
    const double rho_by_hand = 1.0 - 6.0 * 6.0 / (6.0 * 35.0);
    EXPECT_NEAR(spearman_rho(kTreeScores, kWinRates), rho_by_hand, 1e-12);
    EXPECT_NEAR(spearman_rho(kTreeScores, kWinRates), 0.8286, 5e-5);
    EXPECT_NEAR(kendall_tau(kTreeScores, kWinRates), 11.0 / 15.0, 1e-12);
    EXPECT_NEAR(kendall_tau(kTreeScores, kWinRates), pair_count_tau(kTreeScores, kWinRates), 1e-12);
}

TEST(Correlation, IdentityReversalAndAdjacentSwap) {
    const std::vector<double> x{1, 2, 3, 4, 5, 6};
    const std::vector<double> rev{6, 5, 4, 3, 2, 1};
    const std::vector<double> one_swap{1, 2, 4, 3, 5, 6};
    EXPECT_DOUBLE_EQ(spearman_rho(x, x), 1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(x, x), 1.0);
    EXPECT_DOUBLE_EQ(spearman_rho(x, rev), -1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(x, rev), -1.0);
    EXPECT_NEAR(kendall_tau(x, one_swap), 13.0 / 15.0, 1e-12);
}

TEST(Correlation, TiesUseRankPearsonAndTauB) {
    const std::vector<double> x{1, 2, 2, 3};
    const std::vector<double> y{1, 2, 3, 4};
    // Ranks x = {1, 2.5, 2.5, 4}; Pearson with {1,2,3,4} = 4.5 / sqrt(4.5 * 5).
    EXPECT_NEAR(spearman_rho(x, y), 4.5 / std::sqrt(4.5 * 5.0), 1e-12);
    // 5 concordant, 0 discordant, one pair tied in x: 5 / sqrt(5 * 6).
    EXPECT_NEAR(kendall_tau(x, y), 5.0 / std::sqrt(30.0), 1e-12);
    const std::vector<double> flat{1, 1, 1, 1};
    EXPECT_EQ(spearman_rho(flat, y), 0.0);
}

TEST(Correlation, Errors) {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{1, 2};
    const std::vector<double> one{1};
    EXPECT_THROW(spearman_rho(a, b), MetricsError);
    EXPECT_THROW(kendall_tau(one, one), MetricsError);
}

TEST(CorrelationProperty, InvariantUnderMonotoneTransformAndSymmetric) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + trial % 8;
        std::vector<double> x(n), y(n), fx(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::round(n01(rng) * 3);
            y[i] = n01(rng);
            fx[i] = std::exp(x[i]) + 7.0;
        }
        ASSERT_NEAR(spearman_rho(x, y), spearman_rho(fx, y), 1e-9);
        ASSERT_NEAR(kendall_tau(x, y), kendall_tau(fx, y), 1e-9);
        ASSERT_NEAR(spearman_rho(x, y), spearman_rho(y, x), 1e-12);
        ASSERT_NEAR(kendall_tau(x, y), kendall_tau(y, x), 1e-12);
        ASSERT_LE(std::abs(spearman_rho(x, y)), 1.0 + 1e-12);
        ASSERT_LE(std::abs(kendall_tau(x, y)), 1.0 + 1e-12);
    }
}

TEST(Correlation, RankingFilesJoinOnLabel) {
    const auto a = read_ranking_csv(tjtest::fixture("rankings/tree_scores.csv"));
    const auto b = read_ranking_csv(tjtest::fixture("rankings/win_rates.csv"));
    ASSERT_EQ(a.size(), 6u);
    const auto c = correlate_rankings(a, b);
    EXPECT_EQ(c.n, 6u);
    EXPECT_NEAR(c.rho, 0.83, 0.005);
    EXPECT_NEAR(c.tau, 0.73, 0.005);
}

TEST(Tournament, OrdersSyntheticAgentsAroundReference) {
    const auto r = tournament_rank({"skill:1", "skill:3", "skill:2"}, "ref:2", synthetic_runner());
    ASSERT_EQ(r.ranked.size(), 4u);
    EXPECT_EQ(r.ranked[0].model, "skill:3");
    EXPECT_GT(r.ranked[0].score, 2.5);
    EXPECT_EQ(r.ranked.back().model, "skill:1");
    EXPECT_LT(r.ranked.back().score, 2.5);
    // skill:2 against the skill-2 reference is exactly parity; the reference follows it.
    EXPECT_EQ(r.ranked[1].model, "skill:2");
    EXPECT_DOUBLE_EQ(r.ranked[1].score, 2.5);
    EXPECT_TRUE(r.ranked[2].is_reference);
    EXPECT_TRUE(r.unranked.empty());
}

TEST(Tournament, FailedSessionIsUnranked) {
    SessionRunner run = [](const std::string& a, const std::string&) -> double {
        if (a == "broken") throw BackendError(BackendError::Kind::Timeout, a, "down");
        return 3.0;
    };
    const auto r = tournament_rank({"good", "broken"}, "ref", run);
    EXPECT_TRUE(r.contains("good"));
    EXPECT_FALSE(r.contains("broken"));
    ASSERT_EQ(r.unranked.size(), 1u);
    EXPECT_EQ(r.unranked[0].first, "broken");
    EXPECT_THROW(tournament_rank({}, "ref", run), MetricsError);
}

TEST(Refine, SortedOrderNeedsOnePass) {
    int sessions = 0;
    const auto r = bubble_refine({"skill:3", "skill:2", "skill:1"}, synthetic_runner(&sessions), 5);
    EXPECT_EQ(r.passes, 1);
    EXPECT_EQ(r.swaps, 0);
    EXPECT_EQ(sessions, 2);
    EXPECT_EQ(r.order, (std::vector<std::string>{"skill:3", "skill:2", "skill:1"}));
}

TEST(Refine, SingleInversionSwapsOnce) {
    const auto r = bubble_refine({"skill:3", "skill:1", "skill:2"}, synthetic_runner(), 5);
    EXPECT_EQ(r.swaps, 1);
    EXPECT_EQ(r.passes, 2);
    EXPECT_EQ(r.order, (std::vector<std::string>{"skill:3", "skill:2", "skill:1"}));
}

TEST(Refine, OnePassOverReversedOrder) {
    // Strength is the numeric suffix; one bubble pass moves the weakest to the end.
    SessionRunner run = [](const std::string& a, const std::string& b) { return skill_of(a) > skill_of(b) ? 4.0 : 1.0; };
    const auto r = bubble_refine({"m:1", "m:2", "m:3", "m:4"}, run, 1);
    EXPECT_EQ(r.passes, 1);
    EXPECT_EQ(r.swaps, 3);
    EXPECT_EQ(r.order, (std::vector<std::string>{"m:2", "m:3", "m:4", "m:1"}));
}

TEST(Refine, EachPairPlayedAtMostOnce) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> order;
        for (int i = 0; i < 6; ++i) order.push_back("m:" + std::to_string(i));
        std::shuffle(order.begin(), order.end(), rng);
        std::set<std::pair<std::string, std::string>> seen;
        bool repeated = false;
        SessionRunner run = [&](const std::string& a, const std::string& b) {
            repeated |= !seen.insert(std::minmax(a, b)).second;
            return skill_of(a) > skill_of(b) ? 4.0 : 1.0;
        };
        const auto r = bubble_refine(order, run, 100);
        ASSERT_FALSE(repeated);
        ASSERT_LE(r.sessions_run, 15);
        ASSERT_TRUE(std::is_sorted(r.order.begin(), r.order.end(),
                                   [](const auto& x, const auto& y) { return skill_of(x) > skill_of(y); }));
    }
}

TEST(Refine, FailureCountsAsNoSwap) {
    SessionRunner run = [](const std::string&, const std::string&) -> double { throw std::runtime_error("x"); };
    const auto r = bubble_refine({"a", "b"}, run, 3);
    EXPECT_EQ(r.swaps, 0);
    EXPECT_TRUE(r.log[0].failed);
    EXPECT_THROW(bubble_refine({"a"}, run, 3), MetricsError);
}
