#pragma once

// Error-rate studies: Monte Carlo FNR/FPR for the bivariate systems, the
// binomial model of ensemble error, scoring against ground truth and
// bin-count sensitivity scans.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcausal/graph.hpp"
#include "rcausal/significance.hpp"
#include "rcausal/synthetic.hpp"

namespace rcausal {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    // Detected links explained by true links, kept out of fp when
    // indirect links are excluded.
    std::size_t indirect = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn + indirect; }
    double fnr() const noexcept;
    double fpr() const noexcept;
};

struct ErrorRatePoint {
    std::size_t data_length = 0;
    double m_over_eps = 0.0;
    double fnr = 0.0;
    double fpr = 0.0;
    std::size_t n_trials = 0;
};

struct ErrorRateCurve {
    std::vector<ErrorRatePoint> points;

    const ErrorRatePoint* find(std::size_t data_length, double m_over_eps) const;
    /// Columns: data_length,m_over_eps,fnr,fpr,n_trials.
    std::string to_csv() const;
};

struct MonteCarloConfig {
    SystemKind kind = SystemKind::BivariateLinear;
    std::vector<std::size_t> lengths{100, 1000};
    std::vector<double> ratios{0.1, 0.2, 0.3, 0.4, 0.5};
    std::size_t n_trials = 1000;
    std::uint64_t rng_seed = 0;
    SurrogateConfig surrogate;
    std::optional<std::size_t> bins;  // empty: Scott's rule per sample

    void validate() const;
};

/// For every (length, ratio) pair, generates n_trials bivariate samples
/// with m = ratio and eps = 1. FNR is the fraction where X->Y at lag 1 is
/// not detected, FPR the fraction where X->Y at lag 2 is.
ErrorRateCurve monte_carlo_rates(const MonteCarloConfig& cfg);

/// Probability that at least k_min of n independent subsamples err, each
/// with probability e_s: sum_{i=k_min}^{n} C(n,i) e_s^i (1-e_s)^(n-i).
double ensemble_error_binomial(double e_s, std::size_t n, std::size_t k_min);

/// Ensemble miss probability for a true link when each subsample misses it
/// with probability e_s: the link fails the k_min-of-n rule when more than
/// n - k_min subsamples miss it.
double ensemble_miss_binomial(double e_s, std::size_t n, std::size_t k_min);

/// Classifies every candidate (source, target, lag), lag in [1, max_lag],
/// over the graph's variables. With exclude_indirect, detected indirect
/// links count under `indirect` instead of fp.
ConfusionCounts score_against_truth(const LaggedCausalGraph& inferred, const GroundTruth& truth,
                                    bool exclude_indirect = true);

struct SensitivityEntry {
    std::size_t bins = 0;
    LaggedCausalGraph graph;
    double jaccard = 1.0;  // against the center graph
};

struct SensitivityReport {
    std::size_t center_bins = 0;
    std::vector<SensitivityEntry> entries;

    bool stable() const noexcept;
    /// Columns: bins,links,jaccard.
    std::string to_csv() const;
};

/// TE graphs for every bin count in [center - radius, center + radius].
/// Requires center - radius >= 2.
SensitivityReport bin_sensitivity_scan(const Dataset& d, std::size_t center_bins, std::size_t radius,
                                       GraphOptions opts);

}  // namespace rcausal
