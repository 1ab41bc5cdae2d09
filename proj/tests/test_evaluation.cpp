#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rcausal/error.hpp"
#include "rcausal/evaluation.hpp"

using namespace rcausal;

namespace {

double choose(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

double tail_oracle(double p, int n, int k) {
    double s = 0.0;
    for (int i = k; i <= n; ++i) s += choose(n, i) * std::pow(p, i) * std::pow(1 - p, n - i);
    return s;
}

}  // namespace

TEST(Binomial, ClosedForms) {
    // 10 * 0.1^9 * 0.9 + 0.1^10
    EXPECT_NEAR(ensemble_error_binomial(0.1, 10, 9), 9.1e-9, 1e-12 * 9.1e-9);
    EXPECT_NEAR(ensemble_error_binomial(0.5, 10, 9), 11.0 / 1024.0, 1e-15);
    EXPECT_NEAR(ensemble_miss_binomial(0.1, 10, 9), 1.0 - std::pow(0.9, 10) - std::pow(0.9, 9), 1e-14);
    EXPECT_DOUBLE_EQ(ensemble_error_binomial(0.0, 10, 9), 0.0);
    EXPECT_DOUBLE_EQ(ensemble_error_binomial(1.0, 10, 9), 1.0);
    EXPECT_NEAR(ensemble_error_binomial(0.3, 5, 1), 1.0 - std::pow(0.7, 5), 1e-15);
}

TEST(Binomial, MatchesDirectSum) {
    for (int n : {1, 3, 10, 25}) {
        for (int k = 1; k <= n; ++k) {
            for (double p : {0.01, 0.2, 0.5, 0.77}) {
                EXPECT_NEAR(ensemble_error_binomial(p, n, k), tail_oracle(p, n, k), 1e-13);
                EXPECT_NEAR(ensemble_miss_binomial(p, n, k), tail_oracle(p, n, n - k + 1), 1e-13);
            }
        }
    }
}

TEST(Binomial, MonotoneInErrorRateAndThreshold) {
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double v = ensemble_error_binomial(i / 100.0, 20, 15);
        EXPECT_GE(v, prev);
        prev = v;
    }
    for (std::size_t k = 2; k <= 20; ++k) {
        EXPECT_LE(ensemble_error_binomial(0.3, 20, k), ensemble_error_binomial(0.3, 20, k - 1));
    }
}

TEST(Binomial, RejectsBadArguments) {
    EXPECT_THROW(ensemble_error_binomial(-0.1, 10, 9), Error);
    EXPECT_THROW(ensemble_error_binomial(1.1, 10, 9), Error);
    EXPECT_THROW(ensemble_error_binomial(0.1, 10, 0), Error);
    EXPECT_THROW(ensemble_error_binomial(0.1, 10, 11), Error);
}

TEST(Scoring, EmptyGraphIsAllNegatives) {
    LaggedCausalGraph g;
    g.variables = {"X", "Y", "Z"};
    g.max_lag = 4;
    const auto c = score_against_truth(g, GroundTruth{});
    EXPECT_EQ(c.tn, 3u * 2u * 4u);
    EXPECT_EQ(c.total(), 24u);
    EXPECT_EQ(c.fpr(), 0.0);
}

TEST(Scoring, TruthItselfIsPerfect) {
    SystemSpec spec;
    spec.kind = SystemKind::B;
    const auto truth = ground_truth(spec);
    LaggedCausalGraph g;
    g.variables = {"X", "Y", "Z", "W"};
    g.max_lag = 4;
    for (const auto& l : truth.true_links) g.links.push_back({l.source, l.target, l.lag, 1.0, true});
    const auto c = score_against_truth(g, truth);
    EXPECT_EQ(c.tp, truth.true_links.size());
    EXPECT_EQ(c.fp, 0u);
    EXPECT_EQ(c.fn, 0u);
    EXPECT_EQ(c.fnr(), 0.0);
}

TEST(Scoring, PartitionsEveryCandidate) {
    SystemSpec spec;
    spec.kind = SystemKind::B;
    const auto truth = ground_truth(spec);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        LaggedCausalGraph g;
        g.variables = {"X", "Y", "Z", "W"};
        g.max_lag = 4;
        for (const auto& s : g.variables) {
            for (const auto& t : g.variables) {
                for (std::size_t lag = 1; s != t && lag <= 4; ++lag) {
                    if (rng() % 2) g.links.push_back({s, t, lag, 1.0, true});
                }
            }
        }
        const auto with = score_against_truth(g, truth, true);
        const auto without = score_against_truth(g, truth, false);
        EXPECT_EQ(with.total(), 48u);
        EXPECT_EQ(without.total(), 48u);
        EXPECT_EQ(with.tp + with.fp + with.indirect, g.links.size());
        EXPECT_EQ(without.indirect, 0u);
        EXPECT_EQ(without.fp, with.fp + with.indirect);
    }
}

TEST(Scoring, TruthOutsideGraph) {
    LaggedCausalGraph g;
    g.variables = {"X", "Y"};
    GroundTruth t;
    t.true_links = {{"X", "Q", 1, 0.5}};
    EXPECT_THROW(score_against_truth(g, t), Error);
}

TEST(MonteCarlo, Validation) {
    MonteCarloConfig c;
    c.n_trials = 99;
    EXPECT_THROW(c.validate(), Error);
    c.n_trials = 100;
    c.kind = SystemKind::B;
    EXPECT_THROW(c.validate(), Error);
    c.kind = SystemKind::BivariateLinear;
    c.ratios = {-0.1};
    EXPECT_THROW(c.validate(), Error);
}

TEST(MonteCarlo, ZeroSignalMissesAndStrongSignalHits) {
    MonteCarloConfig c;
    c.lengths = {300};
    c.ratios = {0.0, 1.0};
    c.n_trials = 100;
    c.rng_seed = 2;
    c.surrogate.n_surrogates = 30;
    const auto curve = monte_carlo_rates(c);
    ASSERT_EQ(curve.points.size(), 2u);
    EXPECT_GT(curve.find(300, 0.0)->fnr, 0.8);
    EXPECT_LT(curve.find(300, 1.0)->fnr, 0.05);
    EXPECT_EQ(curve.find(300, 1.0)->n_trials, 100u);
    EXPECT_EQ(curve.find(1000, 1.0), nullptr);
    EXPECT_EQ(curve.to_csv().substr(0, curve.to_csv().find('\n')), "data_length,m_over_eps,fnr,fpr,n_trials");
}

TEST(Sensitivity, ZeroRadiusAndDegenerateCenter) {
    SystemSpec spec;
    spec.kind = SystemKind::B;
    spec.rng_seed = 4;
    const auto d = generate(spec).data;
    GraphOptions o;
    o.surrogate.rng_seed = 4;
    o.surrogate.n_surrogates = 30;
    const auto r = bin_sensitivity_scan(d, 8, 0, o);
    ASSERT_EQ(r.entries.size(), 1u);
    EXPECT_EQ(r.entries[0].bins, 8u);
    EXPECT_EQ(r.entries[0].jaccard, 1.0);
    EXPECT_TRUE(r.stable());
    EXPECT_EQ(r.to_csv().substr(0, r.to_csv().find('\n')), "bins,links,jaccard");
    try {
        bin_sensitivity_scan(d, 3, 2, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateBins);
    }
}

TEST(Sensitivity, EntriesSpanRadius) {
    SystemSpec spec;
    spec.kind = SystemKind::B;
    spec.rng_seed = 6;
    const auto d = generate(spec).data;
    GraphOptions o;
    o.surrogate.rng_seed = 6;
    o.surrogate.n_surrogates = 20;
    const auto r = bin_sensitivity_scan(d, 6, 2, o);
    ASSERT_EQ(r.entries.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(r.entries[i].bins, 4 + i);
        EXPECT_GE(r.entries[i].jaccard, 0.0);
        EXPECT_LE(r.entries[i].jaccard, 1.0);
    }
    EXPECT_EQ(r.entries[2].jaccard, 1.0);
}
