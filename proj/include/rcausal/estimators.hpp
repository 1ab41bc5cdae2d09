#pragma once

// Fixed-width histogram estimators: Shannon and joint entropy, mutual
// information and lagged transfer entropy, all in bits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcausal/timeseries.hpp"

namespace rcausal {

using Symbol = std::uint32_t;

// Equal-width bins over [lower, upper]; the rightmost edge is inclusive and
// values outside the range clamp to the outer bins.
struct VariableBins {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 1;

    std::size_t bin_of(double v) const noexcept;
    std::vector<double> edges() const;
};

// One bin count shared by every variable of a system, with per-variable
// ranges.
struct BinningSpec {
    std::size_t bin_count = 0;
    std::vector<std::string> names;
    std::vector<VariableBins> bins;

    const VariableBins& for_variable(const std::string& name) const;
};

/// Bins spanning the observed [min, max] of every series in d.
BinningSpec make_binning(const Dataset& d, std::size_t bin_count);
BinningSpec make_binning(std::span<const TimeSeries> series, std::size_t bin_count);

/// Scott's rule: 3.5 * sigma / l^(1/3), sigma the sample standard deviation.
double scott_bin_width(std::span<const double> values);
inline double scott_bin_width(const TimeSeries& s) { return scott_bin_width(s.view()); }

/// ceil((max - min) / scott_bin_width). Throws ZeroVariance for constant input.
std::size_t scott_bin_count(std::span<const double> values);

/// Minimum Scott bin count over all variables. Throws ZeroVariance if any
/// variable is constant and DegenerateBins if the result is below 2.
std::size_t system_bin_count(const Dataset& d);

std::vector<Symbol> discretize(std::span<const double> values, const VariableBins& bins);

// Dense count table over 1-3 binned coordinates.
struct JointHistogram {
    std::vector<std::string> dims;
    std::size_t bin_count = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::size_t rank() const noexcept { return dims.size(); }
};

/// Builds a histogram from aligned symbol sequences (one per dimension).
JointHistogram make_histogram(std::span<const std::span<const Symbol>> coords, std::size_t bin_count,
                              std::vector<std::string> dims = {});

/// -sum p log2 p over occupied cells. Works for any rank (joint entropy for
/// rank > 1). Throws EmptyHistogram when total is zero.
double shannon_entropy(const JointHistogram& h);
double shannon_entropy(std::span<const std::uint64_t> counts);

/// Joint entropy of aligned symbol sequences without materializing the
/// dense table.
double joint_entropy(std::span<const std::span<const Symbol>> coords, std::size_t bin_count);

/// H(X) + H(Y) - H(X,Y), clamped at zero.
double mutual_information(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t bin_count);
double mutual_information(const TimeSeries& x, const TimeSeries& y, const BinningSpec& spec);

/// -H(Y_past) + H(X_past, Y_past) + H(Y_past, Y_now) - H(X_past, Y_past, Y_now)
/// on the aligned triples (x[t-lag], y[t-lag], y[t]) for t in [lag, l).
double transfer_entropy(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t lag,
                        std::size_t bin_count);
double transfer_entropy(const TimeSeries& x, const TimeSeries& y, std::size_t lag, const BinningSpec& spec);

// Precomputes every target-only term for one (target, lag) so that repeated
// evaluation against shuffled sources only touches source-dependent
// entropies. source_past must hold x[t - lag] for t in [lag, l).
class LaggedEstimator {
public:
    LaggedEstimator(std::span<const Symbol> target, std::size_t lag, std::size_t bin_count);

    std::size_t effective_length() const noexcept { return target_now_.size(); }
    std::size_t lag() const noexcept { return lag_; }

    /// MI(x[t - lag]; y[t]).
    double mutual_information(std::span<const Symbol> source_past) const;
    double transfer_entropy(std::span<const Symbol> source_past) const;

private:
    void check(std::span<const Symbol> source_past) const;

    std::size_t lag_;
    std::size_t bin_count_;
    std::vector<Symbol> target_past_;
    std::vector<Symbol> target_now_;
    std::vector<std::uint64_t> past_now_keys_;
    double h_now_;
    double h_past_;
    double h_past_now_;
};

}  // namespace rcausal
