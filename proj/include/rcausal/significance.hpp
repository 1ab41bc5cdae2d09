#pragma once

// Shuffled-surrogate significance for mutual information and the MI-gated
// transfer entropy link decision.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "rcausal/estimators.hpp"
#include "rcausal/random.hpp"
#include "rcausal/timeseries.hpp"

namespace rcausal {

struct SurrogateConfig {
    std::size_t n_surrogates = 100;
    double confidence = 0.95;
    std::uint64_t rng_seed = 0;
    // When off, a link only needs significant lagged MI.
    bool te_surrogate_test = false;

    void validate() const;
};

struct SignificanceResult {
    double observed = 0.0;
    double surrogate_mean = 0.0;
    double surrogate_std = 0.0;
    double statistic = 0.0;
    bool significant = false;
};

struct LinkTestResult {
    bool link = false;
    double te = 0.0;
    SignificanceResult mi;
    std::optional<SignificanceResult> te_test;  // absent when MI gating failed
};

/// Uniformly random permutation of the values; name is kept.
TimeSeries shuffle_surrogate(const TimeSeries& s, SplitMix64& rng);

/// One-sided critical value of Student's t with n_surrogates - 1 degrees of
/// freedom at the configured confidence.
double critical_value(double confidence, std::size_t n_surrogates);

/// statistic = (observed - mean) / std over the surrogate values;
/// significant when it exceeds critical_value. With zero spread the
/// decision is observed > mean.
SignificanceResult decide(double observed, std::span<const double> surrogates, double confidence);

/// MI(x; y) against n_surrogates shuffles of x.
SignificanceResult mi_significance(const TimeSeries& x, const TimeSeries& y, const BinningSpec& spec,
                                   const SurrogateConfig& cfg);
SignificanceResult mi_significance(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t bin_count,
                                   const SurrogateConfig& cfg, std::uint64_t stream = 0);

/// Gates on the significance of MI(x[t - lag]; y[t]); if it passes, computes
/// TE(x -> y) at lag and, unless disabled, tests it against shuffles of
/// the lag-aligned source. `stream` identifies the (pair, lag) so surrogate
/// draws are independent of evaluation order.
LinkTestResult te_link_test(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t lag,
                            std::size_t bin_count, const SurrogateConfig& cfg, std::uint64_t stream = 0);
LinkTestResult te_link_test(const TimeSeries& x, const TimeSeries& y, std::size_t lag, const BinningSpec& spec,
                            const SurrogateConfig& cfg, std::uint64_t stream = 0);

}  // namespace rcausal
