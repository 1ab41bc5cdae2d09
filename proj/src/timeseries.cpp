#include "rcausal/timeseries.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "rcausal/error.hpp"

namespace rcausal {

std::vector<std::string> Dataset::names() const {
    std::vector<std::string> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.name);
    return out;
}

std::optional<std::size_t> Dataset::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].name == name) return i;
    }
    return std::nullopt;
}

Dataset Dataset::window(std::size_t start, std::size_t count) const {
    if (start + count > length()) {
        throw Error(ErrorCode::WindowTooLong, "window [" + std::to_string(start) + ", " +
                                                  std::to_string(start + count) +
                                                  ") exceeds dataset length " +
                                                  std::to_string(length()));
    }
    Dataset out;
    out.sampling_step = sampling_step;
    out.series.reserve(series.size());
    for (const auto& s : series) {
        auto first = s.values.begin() + static_cast<std::ptrdiff_t>(start);
        out.series.push_back({s.name, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(count))});
    }
    return out;
}

Dataset validate_dataset(Dataset raw) {
    if (raw.series.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "a dataset needs at least two series");
    }
    const std::size_t len = raw.series.front().size();
    if (len == 0) throw Error(ErrorCode::TooShort, "series '" + raw.series.front().name + "' is empty");
    std::unordered_set<std::string> seen;
    for (const auto& s : raw.series) {
        if (s.size() != len) {
            throw Error(ErrorCode::LengthMismatch, "series '" + s.name + "' has length " +
                                                       std::to_string(s.size()) + ", expected " +
                                                       std::to_string(len));
        }
        if (!seen.insert(s.name).second) {
            throw Error(ErrorCode::DuplicateName, "duplicate series name '" + s.name + "'");
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!std::isfinite(s.values[i])) {
                throw Error(ErrorCode::NonFinite, "series '" + s.name + "' has a non-finite value at index " +
                                                      std::to_string(i));
            }
        }
    }
    return raw;
}

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

TimeSeries detrend_linear(const TimeSeries& s) {
    const std::size_t n = s.size();
    if (n < 2) throw Error(ErrorCode::TooShort, "detrending needs at least two points");

    // Centered index makes the 2x2 normal equations diagonal.
    const double t_mean = static_cast<double>(n - 1) / 2.0;
    const double y_mean = mean(s.values);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i) - t_mean;
        sxy += dt * (s.values[i] - y_mean);
        sxx += dt * dt;
    }
    const double slope = sxy / sxx;

    TimeSeries out{s.name, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = s.values[i] - (y_mean + slope * (static_cast<double>(i) - t_mean));
    }
    return out;
}

TimeSeries deseasonalize(const TimeSeries& s, std::size_t period) {
    if (period == 0) throw Error(ErrorCode::InvalidArgument, "season period must be positive");
    if (s.size() < period) {
        throw Error(ErrorCode::TooShort, "series '" + s.name + "' is shorter than one seasonal period");
    }
    std::vector<double> sums(period, 0.0);
    std::vector<std::size_t> counts(period, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        sums[i % period] += s.values[i];
        ++counts[i % period];
    }
    TimeSeries out{s.name, s.values};
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.values[i] -= sums[i % period] / static_cast<double>(counts[i % period]);
    }
    return out;
}

Dataset preprocess(const Dataset& d, const PreprocessSpec& spec) {
    if (spec.deseasonalize && spec.season_period < 2) {
        throw Error(ErrorCode::InvalidArgument, "season period must be at least 2");
    }
    Dataset out = d;
    for (auto& s : out.series) {
        if (spec.detrend) s = detrend_linear(s);
        if (spec.deseasonalize) s = deseasonalize(s, spec.season_period);
    }
    return out;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    const std::string t = trim(cell);
    if (t.empty()) {
        throw Error(ErrorCode::Parse, "blank cell in column '" + column + "' at data row " + std::to_string(row));
    }
    double v = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::Parse, "cannot parse '" + t + "' in column '" + column + "' at data row " +
                                          std::to_string(row));
    }
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFinite, "non-finite value in column '" + column + "' at data row " +
                                              std::to_string(row));
    }
    return v;
}

}  // namespace

Dataset read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "CSV input is empty");
    std::vector<std::string> header = split_row(line);
    for (auto& h : header) h = trim(h);

    const std::size_t skip = (!header.empty() && header.front() == "t") ? 1 : 0;
    Dataset d;
    for (std::size_t c = skip; c < header.size(); ++c) {
        if (header[c].empty()) throw Error(ErrorCode::Parse, "blank column name in CSV header");
        for (const auto& s : d.series) {
            if (s.name == header[c]) throw Error(ErrorCode::DuplicateName, "duplicate column '" + header[c] + "'");
        }
        d.series.push_back({header[c], {}});
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split_row(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::Parse, "data row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                              " cells, header has " + std::to_string(header.size()));
        }
        for (std::size_t c = skip; c < cells.size(); ++c) {
            d.series[c - skip].values.push_back(parse_cell(cells[c], row, header[c]));
        }
    }
    return d;
}

Dataset read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
    return read_csv(in);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& d) {
    for (std::size_t c = 0; c < d.series.size(); ++c) {
        out << (c ? "," : "") << d.series[c].name;
    }
    out << '\n';
    for (std::size_t i = 0; i < d.length(); ++i) {
        for (std::size_t c = 0; c < d.series.size(); ++c) {
            out << (c ? "," : "") << format_double(d.series[c].values[i]);
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    write_csv(out, d);
}

}  // namespace rcausal
