#pragma once

// Lagged causal graphs over all ordered variable pairs, their construction
// from a dataset, and JSON / DOT / CSV serialization.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcausal/granger.hpp"
#include "rcausal/significance.hpp"
#include "rcausal/timeseries.hpp"

namespace rcausal {

enum class Method { TransferEntropy, Granger };

std::string_view to_string(Method m) noexcept;
/// "te" or "gc".
Method parse_method(std::string_view s);

struct LinkKey {
    std::string source;
    std::string target;
    std::size_t lag = 0;

    auto operator<=>(const LinkKey&) const = default;
    bool operator==(const LinkKey&) const = default;
};

std::string to_string(const LinkKey& k);  // "X->Y@3"

struct CausalLink {
    std::string source;
    std::string target;
    std::size_t lag = 0;
    double strength = 0.0;  // TE in bits, or the GC F statistic
    bool significant = false;

    LinkKey key() const { return {source, target, lag}; }
    bool operator==(const CausalLink&) const = default;
};

struct LaggedCausalGraph {
    std::vector<std::string> variables;
    std::size_t max_lag = 4;
    Method method = Method::TransferEntropy;
    std::vector<CausalLink> links;

    bool contains(const LinkKey& k) const;
    const CausalLink* find(const LinkKey& k) const;
    std::vector<LinkKey> keys() const;

    /// Variables alphabetical, links ordered by (source, target, lag).
    LaggedCausalGraph canonical() const;
    /// Throws VariableMismatch / InvalidArgument on self-links, unknown
    /// variables, lags outside [1, max_lag] or duplicate triples.
    void validate() const;

    /// Equality of the canonical forms.
    friend bool operator==(const LaggedCausalGraph& a, const LaggedCausalGraph& b);
};

struct GraphOptions {
    Method method = Method::TransferEntropy;
    std::size_t max_lag = 4;
    std::optional<std::size_t> bins;  // empty: Scott's rule over the dataset
    // Explicit binning (e.g. a parent sample's); takes precedence over bins.
    std::optional<BinningSpec> binning;
    SurrogateConfig surrogate;
    GrangerConfig granger;
};

/// Bin count used for a dataset: opts.bins when set, otherwise the minimum
/// Scott count over the non-constant variables.
std::size_t resolve_bin_count(const Dataset& d, const GraphOptions& opts);

/// Every candidate (source, target, lag) with source != target and lag in
/// [1, max_lag], k(k-1)L in total, with its strength and significance.
std::vector<CausalLink> evaluate_candidates(const Dataset& d, const GraphOptions& opts);

/// The significant candidates only.
LaggedCausalGraph build_graph(const Dataset& d, const GraphOptions& opts);

// Serialization. Output is stable: variables alphabetical, links sorted.
std::string export_graph(const LaggedCausalGraph& g, std::string_view format);  // "json" | "dot" | "csv"
std::string to_json(const LaggedCausalGraph& g);
std::string to_dot(const LaggedCausalGraph& g);
std::string to_csv(const LaggedCausalGraph& g);
LaggedCausalGraph graph_from_json(std::string_view text);

struct GraphDiff {
    std::vector<CausalLink> only_a;
    std::vector<CausalLink> only_b;
    std::vector<CausalLink> both;  // taken from a
};

/// Partition of link triples. Throws VariableMismatch when the variable
/// sets differ.
GraphDiff diff_graphs(const LaggedCausalGraph& a, const LaggedCausalGraph& b);

/// |A n B| / |A u B| over link triples; 1 when both are empty.
double jaccard(const LaggedCausalGraph& a, const LaggedCausalGraph& b);

}  // namespace rcausal
