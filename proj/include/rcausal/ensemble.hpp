#pragma once

// Subsample-ensemble robustness check. A link of the full-sample graph is
// kept only if it is significant in at least `threshold` of the contiguous
// subsamples drawn from the data.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcausal/graph.hpp"
#include "rcausal/timeseries.hpp"

namespace rcausal {

enum class SubsampleMode {
    RandomContinuous,  // start uniform on [0, l - q]; windows may overlap
    FixedOverlap,      // evenly spaced from the first to the last window
    NonOverlapping,    // starts 0, q, 2q, ...
};

std::string_view to_string(SubsampleMode m) noexcept;
SubsampleMode parse_subsample_mode(std::string_view s);

struct EnsembleConfig {
    std::size_t n_subsamples = 100;
    std::size_t subsample_length = 200;
    SubsampleMode mode = SubsampleMode::RandomContinuous;
    double threshold = 0.9;
    std::uint64_t rng_seed = 0;
    // Bin every subsample with the parent sample's binning instead of
    // re-deriving Scott's rule per subsample.
    bool reuse_parent_bins = false;

    void validate(std::size_t data_length) const;
};

/// Window starts, one per subsample. Start j of a random-continuous draw
/// depends only on (rng_seed, j).
std::vector<std::size_t> subsample_starts(std::size_t data_length, const EnsembleConfig& cfg);
std::vector<Dataset> draw_subsamples(const Dataset& d, const EnsembleConfig& cfg);

struct LinkFrequency {
    LinkKey key;
    std::size_t count = 0;
    double fraction = 0.0;
    double mean_strength = 0.0;  // over the subsamples where significant
};

struct LinkFrequencyTable {
    std::vector<std::string> variables;
    std::size_t max_lag = 0;
    Method method = Method::TransferEntropy;
    std::size_t n_subsamples = 0;
    std::vector<LinkFrequency> entries;  // every candidate link, sorted by key

    const LinkFrequency* find(const LinkKey& k) const;
    double fraction(const LinkKey& k) const;

    /// Columns: source,target,lag,count,fraction.
    std::string to_csv() const;
};

/// Counts, for every candidate link, the subgraphs in which it is
/// significant. Throws VariableMismatch unless all graphs share variables,
/// max_lag and method.
LinkFrequencyTable link_frequencies(std::span<const LaggedCausalGraph> subgraphs);

/// Smallest count that meets the threshold: ceil(threshold * n).
std::size_t required_count(double threshold, std::size_t n);

struct RobustGraph {
    LaggedCausalGraph graph;
    LinkFrequencyTable frequencies;
    double threshold = 0.9;
};

/// Keeps links whose count reaches required_count(threshold, n).
RobustGraph robust_graph(const LinkFrequencyTable& freq, double threshold);

struct EnsembleResult {
    LaggedCausalGraph full;
    std::vector<std::size_t> starts;
    std::vector<LaggedCausalGraph> subgraphs;
    RobustGraph robust;
};

/// Full-sample graph, one graph per subsample, and the robust graph.
/// Subsample j's surrogate draws derive from (surrogate seed, j).
EnsembleResult run_ensemble(const Dataset& d, const GraphOptions& opts, const EnsembleConfig& cfg);

}  // namespace rcausal
