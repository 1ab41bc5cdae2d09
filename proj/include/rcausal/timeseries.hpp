#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rcausal {

// A named, equally spaced, real-valued series. Index order is time order.
struct TimeSeries {
    std::string name;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    std::span<const double> view() const noexcept { return values; }

    bool operator==(const TimeSeries&) const = default;
};

// Aligned series of identical length. sampling_step is a free-form label
// ("monthly", "30min") and never enters any computation.
struct Dataset {
    std::vector<TimeSeries> series;
    std::string sampling_step;

    std::size_t variable_count() const noexcept { return series.size(); }
    std::size_t length() const noexcept { return series.empty() ? 0 : series.front().size(); }
    std::vector<std::string> names() const;
    std::optional<std::size_t> index_of(const std::string& name) const;

    // Contiguous time window [start, start + count) of every series.
    Dataset window(std::size_t start, std::size_t count) const;

    bool operator==(const Dataset&) const = default;
};

struct PreprocessSpec {
    bool detrend = false;
    bool deseasonalize = false;
    std::size_t season_period = 12;
};

/// Checks equal lengths, finiteness, unique names and at least two series.
/// Returns the input unchanged on success; throws Error otherwise.
Dataset validate_dataset(Dataset raw);

/// Residuals of an ordinary least-squares fit of the values against the
/// integer index. Throws TooShort for fewer than two points.
TimeSeries detrend_linear(const TimeSeries& s);

/// Subtracts, for each phase p in [0, period), the mean of all values whose
/// index is congruent to p. Incomplete final cycles are allowed.
TimeSeries deseasonalize(const TimeSeries& s, std::size_t period);

/// Detrend first, then remove the seasonal cycle, on every series.
Dataset preprocess(const Dataset& d, const PreprocessSpec& spec);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for a single value.
double sample_stddev(std::span<const double> v);

// CSV: header row of names, one row per time step, ',' separator, '.'
// decimal point. A leading column named "t" is skipped. Blank cells are
// rejected.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Dataset& d);
void write_csv_file(const std::string& path, const Dataset& d);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace rcausal
