#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rcausal/error.hpp"
#include "rcausal/granger.hpp"

using namespace rcausal;

namespace {

std::vector<double> normals(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return v;
}

// Residual sum of squares of y on the given columns (plus intercept), by
// Gaussian elimination on the normal equations in long double.
double rss_oracle(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
    const std::size_t k = cols.size() + 1;
    const std::size_t n = y.size();
    auto col = [&](std::size_t j, std::size_t i) -> long double { return j == 0 ? 1.0L : cols[j - 1][i]; };
    std::vector<std::vector<long double>> a(k, std::vector<long double>(k + 1, 0.0L));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) a[r][c] += col(r, i) * col(c, i);
        }
        for (std::size_t i = 0; i < n; ++i) a[r][k] += col(r, i) * y[i];
    }
    for (std::size_t p = 0; p < k; ++p) {
        std::size_t best = p;
        for (std::size_t r = p + 1; r < k; ++r) {
            if (std::fabs(a[r][p]) > std::fabs(a[best][p])) best = r;
        }
        std::swap(a[p], a[best]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == p) continue;
            const long double f = a[r][p] / a[p][p];
            for (std::size_t c = p; c <= k; ++c) a[r][c] -= f * a[p][c];
        }
    }
    long double rss = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        long double fit = 0.0L;
        for (std::size_t j = 0; j < k; ++j) fit += a[j][k] / a[j][j] * col(j, i);
        rss += (y[i] - fit) * (y[i] - fit);
    }
    return static_cast<double>(rss);
}

}  // namespace

TEST(FTest, PValueEdges) {
    EXPECT_EQ(f_test_p_value(0.0, 1, 10), 1.0);
    EXPECT_EQ(f_test_p_value(-1.0, 1, 10), 1.0);
    // F(1, d) = t^2: P(F > 4.964603) = 0.05 for d = 10.
    EXPECT_NEAR(f_test_p_value(4.9646027, 1, 10), 0.05, 1e-6);
}

TEST(Granger, MatchesIndependentOlsOracle) {
    const auto x = normals(1, 120);
    auto y = normals(2, 120);
    for (std::size_t t = 2; t < y.size(); ++t) y[t] += 0.3 * y[t - 1] + 0.4 * x[t - 2];
    for (bool lagwise : {true, false}) {
        GrangerConfig cfg;
        cfg.lagwise = lagwise;
        const std::size_t p = 2;
        const auto r = granger_test(x, y, p, cfg);

        std::vector<double> target;
        std::vector<std::vector<double>> own(p), cross(lagwise ? 1 : p);
        for (std::size_t i = p; i < y.size(); ++i) {
            target.push_back(y[i]);
            for (std::size_t j = 1; j <= p; ++j) own[j - 1].push_back(y[i - j]);
            if (lagwise) {
                cross[0].push_back(x[i - p]);
            } else {
                for (std::size_t j = 1; j <= p; ++j) cross[j - 1].push_back(x[i - j]);
            }
        }
        auto full = own;
        full.insert(full.end(), cross.begin(), cross.end());
        const double rss_r = rss_oracle(own, target);
        const double rss_f = rss_oracle(full, target);
        const double k = static_cast<double>(cross.size());
        const double dfd = static_cast<double>(target.size() - (1 + full.size()));
        EXPECT_NEAR(r.rss_reduced, rss_r, 1e-9 * rss_r);
        EXPECT_NEAR(r.rss_full, rss_f, 1e-9 * rss_f);
        EXPECT_NEAR(r.f_statistic, ((rss_r - rss_f) / k) / (rss_f / dfd), 1e-8);
        EXPECT_EQ(r.df_numerator, cross.size());
        EXPECT_EQ(r.df_denominator, static_cast<std::size_t>(dfd));
        EXPECT_TRUE(r.link);
    }
}

TEST(Granger, RssMonotoneAndLinkMatchesAlpha) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto x = normals(10 + s, 80);
        const auto y = normals(50 + s, 80);
        GrangerConfig cfg;
        cfg.lagwise = s % 2 == 0;
        const auto r = granger_test(x, y, 1 + s % 4, cfg);
        EXPECT_GE(r.rss_reduced, r.rss_full - 1e-9);
        EXPECT_GE(r.p_value, 0.0);
        EXPECT_LE(r.p_value, 1.0);
        EXPECT_EQ(r.link, r.p_value < cfg.alpha);
    }
}

TEST(Granger, NullCalibration) {
    GrangerConfig cfg;
    int fired = 0;
    for (std::uint64_t s = 0; s < 400; ++s) {
        fired += granger_test(normals(2000 + s, 300), normals(5000 + s, 300), 1, cfg).link;
    }
    const double rate = fired / 400.0;
    EXPECT_NEAR(rate, 0.05, 3 * std::sqrt(0.05 * 0.95 / 400));
}

TEST(Granger, RedundantRegressorIsSingularOrNull) {
    // x is y itself, so x[i - 1] duplicates the y[i - 1] column already in the model.
    const auto y = normals(3, 100);
    GrangerConfig cfg;
    try {
        const auto r = granger_test(y, y, 1, cfg);
        EXPECT_NEAR(r.f_statistic, 0.0, 1e-6);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularDesign);
    }
}

TEST(Granger, ConstantSourceIsSingular) {
    const std::vector<double> x(50, 1.0);
    try {
        granger_test(x, normals(4, 50), 1, GrangerConfig{});
        FAIL() << "expected SingularDesign";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularDesign);
    }
}

TEST(Granger, TooShortAndMismatch) {
    GrangerConfig cfg;
    try {
        granger_test(normals(1, 9), normals(2, 9), 4, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooShort);
    }
    try {
        granger_test(normals(1, 20), normals(2, 19), 1, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
    }
}

TEST(GrangerConfig, Validation) {
    GrangerConfig c;
    c.alpha = 0.0;
    EXPECT_THROW(c.validate(), Error);
    c.alpha = 0.05;
    c.order = 0;
    EXPECT_THROW(c.validate(), Error);
}
