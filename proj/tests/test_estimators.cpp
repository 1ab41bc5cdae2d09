#include <cmath>
#include <functional>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "rcausal/error.hpp"
#include "rcausal/estimators.hpp"

using namespace rcausal;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no rcausal::Error thrown";
    return ErrorCode::InvalidArgument;
}

std::vector<Symbol> random_symbols(std::mt19937_64& rng, std::size_t n, std::size_t bins) {
    std::uniform_int_distribution<Symbol> d(0, static_cast<Symbol>(bins - 1));
    std::vector<Symbol> v(n);
    for (auto& s : v) s = d(rng);
    return v;
}

// Plug-in entropy straight from the definition.
double entropy_by_sum(const std::vector<Symbol>& v) {
    std::map<Symbol, double> p;
    for (Symbol s : v) p[s] += 1.0 / static_cast<double>(v.size());
    double h = 0.0;
    for (const auto& [s, q] : p) h -= q * std::log2(q);
    return h;
}

}  // namespace

TEST(Entropy, FourEquiprobableValues) {
    const std::vector<Symbol> v{0, 1, 2, 3};
    std::vector<std::span<const Symbol>> coords{v};
    EXPECT_NEAR(shannon_entropy(make_histogram(coords, 4)), 2.0, 1e-15);
    EXPECT_NEAR(entropy_by_sum(v), 2.0, 1e-15);
}

TEST(Entropy, ConstantIsZeroAndEmptyThrows) {
    const std::vector<std::uint64_t> one{0, 7, 0};
    EXPECT_EQ(shannon_entropy(one), 0.0);
    const std::vector<std::uint64_t> none{0, 0};
    EXPECT_EQ(code_of([&] { shannon_entropy(none); }), ErrorCode::EmptyHistogram);
}

TEST(Entropy, MatchesDirectSumAndBounds) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        const std::size_t bins = 2 + i % 7;
        const auto v = random_symbols(rng, 10 + static_cast<std::size_t>(i) * 13, bins);
        std::vector<std::span<const Symbol>> coords{v};
        const double h = shannon_entropy(make_histogram(coords, bins));
        EXPECT_NEAR(h, entropy_by_sum(v), 1e-12);
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, std::log2(static_cast<double>(bins)) + 1e-12);
    }
}

TEST(JointEntropy, BoundedByMarginals) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
        const auto x = random_symbols(rng, 120, 5);
        const auto y = random_symbols(rng, 120, 5);
        std::vector<std::span<const Symbol>> xy{x, y};
        std::vector<std::span<const Symbol>> xs{x};
        std::vector<std::span<const Symbol>> ys{y};
        const double hxy = joint_entropy(xy, 5);
        const double hx = joint_entropy(xs, 5);
        const double hy = joint_entropy(ys, 5);
        EXPECT_GE(hxy + 1e-12, std::max(hx, hy));
        EXPECT_LE(hxy, hx + hy + 1e-12);
    }
}

TEST(MutualInformation, SymmetricAndSelfEqualsEntropy) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 40; ++i) {
        const auto x = random_symbols(rng, 80, 4);
        auto y = random_symbols(rng, 80, 4);
        for (std::size_t t = 0; t < y.size(); t += 2) y[t] = x[t];
        EXPECT_EQ(mutual_information(x, y, 4), mutual_information(y, x, 4));
        EXPECT_GE(mutual_information(x, y, 4), 0.0);
    }
    const auto x = random_symbols(rng, 200, 6);
    EXPECT_NEAR(mutual_information(x, x, 6), entropy_by_sum(x), 1e-12);
}

TEST(MutualInformation, LengthMismatch) {
    const std::vector<Symbol> a{0, 1, 0}, b{1, 0};
    EXPECT_EQ(code_of([&] { mutual_information(a, b, 2); }), ErrorCode::LengthMismatch);
}

TEST(TransferEntropy, CopiedUniformSourceGivesLogBins) {
    // y(t) = x(t-1) with x i.i.d. uniform over m bins: TE = H(y_t | y_{t-1})
    // = H(x_{t-1} | x_{t-2}) = log2 m in the large-sample limit.
    const std::size_t m = 4;
    std::mt19937_64 rng(30);
    const auto x = random_symbols(rng, 200000, m);
    std::vector<Symbol> y(x.size(), 0);
    for (std::size_t t = 1; t < x.size(); ++t) y[t] = x[t - 1];
    const double te = transfer_entropy(x, y, 1, m);
    EXPECT_NEAR(te, std::log2(static_cast<double>(m)), 5e-3);

    // On the aligned triples y_t equals x_{t-1}, so the plug-in TE is exactly
    // the plug-in H(X_past | Y_past).
    std::map<std::pair<Symbol, Symbol>, double> joint;
    std::map<Symbol, double> ypast;
    const double n = static_cast<double>(x.size() - 1);
    for (std::size_t t = 1; t < x.size(); ++t) {
        joint[{x[t - 1], y[t - 1]}] += 1.0 / n;
        ypast[y[t - 1]] += 1.0 / n;
    }
    double h = 0.0;
    for (const auto& [k, p] : joint) h -= p * std::log2(p / ypast[k.second]);
    EXPECT_NEAR(te, h, 1e-11);
}

TEST(TransferEntropy, IndependentSeriesShrinkWithLength) {
    std::mt19937_64 rng(2);
    double prev = 1e9;
    for (std::size_t n : {200u, 2000u, 20000u}) {
        const auto x = random_symbols(rng, n, 3);
        const auto y = random_symbols(rng, n, 3);
        const double te = transfer_entropy(x, y, 1, 3);
        EXPECT_GE(te, 0.0);
        EXPECT_LT(te, prev);
        prev = te;
    }
    EXPECT_LT(prev, 0.002);
}

TEST(TransferEntropy, BoundedByTargetEntropy) {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 40; ++i) {
        const auto x = random_symbols(rng, 150, 5);
        auto y = random_symbols(rng, 150, 5);
        for (std::size_t t = 2; t < y.size(); t += 3) y[t] = x[t - 2];
        const double te = transfer_entropy(x, y, 2, 5);
        std::vector<Symbol> now(y.begin() + 2, y.end());
        EXPECT_GE(te, -1e-12);
        EXPECT_LE(te, entropy_by_sum(now) + 1e-12);
    }
}

TEST(TransferEntropy, LagTooLarge) {
    const std::vector<Symbol> a{0, 1, 0}, b{1, 0, 1};
    EXPECT_EQ(code_of([&] { transfer_entropy(a, b, 3, 2); }), ErrorCode::LagTooLarge);
    EXPECT_EQ(code_of([&] { transfer_entropy(a, b, 0, 2); }), ErrorCode::InvalidArgument);
}

TEST(LaggedEstimator, AgreesWithFreeFunctions) {
    std::mt19937_64 rng(12);
    const auto x = random_symbols(rng, 300, 6);
    auto y = random_symbols(rng, 300, 6);
    for (std::size_t t = 3; t < y.size(); t += 2) y[t] = x[t - 3];
    const LaggedEstimator est(y, 3, 6);
    const std::span<const Symbol> past(x.data(), est.effective_length());
    EXPECT_NEAR(est.transfer_entropy(past), transfer_entropy(x, y, 3, 6), 1e-12);
    const std::span<const Symbol> now(y.data() + 3, y.size() - 3);
    EXPECT_NEAR(est.mutual_information(past), mutual_information(past, now, 6), 1e-12);
}

TEST(Scott, WidthAndCount) {
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
    const double sigma = std::sqrt(6.0);
    EXPECT_NEAR(scott_bin_width(v), 3.5 * sigma / 2.0, 1e-12);
    EXPECT_EQ(scott_bin_count(v), static_cast<std::size_t>(std::ceil(7.0 / (3.5 * sigma / 2.0))));
    const std::vector<double> flat{2, 2, 2};
    EXPECT_EQ(code_of([&] { scott_bin_count(flat); }), ErrorCode::ZeroVariance);
}

TEST(Scott, SystemCountIsMinimum) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    Dataset d;
    d.series = {{"a", {}}, {"b", {}}};
    for (int i = 0; i < 1000; ++i) {
        d.series[0].values.push_back(z(rng));
        d.series[1].values.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
    }
    const std::size_t expect = std::min(scott_bin_count(d.series[0].view()), scott_bin_count(d.series[1].view()));
    EXPECT_EQ(system_bin_count(d), expect);
    d.series[1].values.assign(1000, 4.0);
    EXPECT_EQ(code_of([&] { system_bin_count(d); }), ErrorCode::ZeroVariance);
}

TEST(Binning, EdgesAndClamping) {
    const VariableBins b{0.0, 4.0, 4};
    EXPECT_EQ(b.edges(), (std::vector<double>{0, 1, 2, 3, 4}));
    EXPECT_EQ(b.bin_of(0.0), 0u);
    EXPECT_EQ(b.bin_of(0.999), 0u);
    EXPECT_EQ(b.bin_of(1.0), 1u);
    EXPECT_EQ(b.bin_of(4.0), 3u);
    EXPECT_EQ(b.bin_of(-7.0), 0u);
    EXPECT_EQ(b.bin_of(99.0), 3u);
}

TEST(Binning, SpecLookup) {
    Dataset d{{{"a", {0, 1, 2, 3}}, {"b", {10, 20, 30, 40}}}};
    const auto spec = make_binning(d, 3);
    EXPECT_EQ(spec.for_variable("b").lower, 10.0);
    EXPECT_EQ(spec.for_variable("b").upper, 40.0);
    EXPECT_EQ(discretize(d.series[1].view(), spec.for_variable("b")), (std::vector<Symbol>{0, 1, 2, 2}));
    EXPECT_EQ(code_of([&] { (void)spec.for_variable("c"); }), ErrorCode::VariableMismatch);
}
