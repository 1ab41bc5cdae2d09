#include "rcausal/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcausal/error.hpp"

namespace rcausal {

namespace {

// Above this key space the dense scratch table would be too large and the
// counts are obtained by sorting instead.
constexpr std::uint64_t kDenseKeyLimit = std::uint64_t{1} << 23;

struct CountScratch {
    std::vector<std::uint32_t> counts;  // all zero between calls
    std::vector<double> c_log2_c{0.0};  // c * log2(c), indexed by c
    std::vector<std::uint64_t> sorted;

    void ensure_table(std::size_t n) {
        for (std::size_t c = c_log2_c.size(); c <= n; ++c) {
            const double dc = static_cast<double>(c);
            c_log2_c.push_back(dc * std::log2(dc));
        }
    }
};

CountScratch& scratch() {
    thread_local CountScratch s;
    return s;
}

// Entropy (bits) of the empirical distribution of key(i), i in [0, n).
// Cells are visited in first-occurrence order, so the floating-point sum
// depends only on the sample order and not on how keys are numbered.
template <typename KeyFn>
double entropy_of(std::size_t n, std::uint64_t key_space, KeyFn key) {
    if (n == 0) throw Error(ErrorCode::EmptyHistogram, "entropy of an empty sample");
    CountScratch& s = scratch();
    s.ensure_table(n);
    double sum = 0.0;
    if (key_space <= kDenseKeyLimit) {
        if (s.counts.size() < key_space) s.counts.resize(key_space, 0);
        for (std::size_t i = 0; i < n; ++i) ++s.counts[key(i)];
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = s.counts[key(i)];
            if (c != 0) {
                sum += s.c_log2_c[c];
                c = 0;
            }
        }
    } else {
        s.sorted.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.sorted[i] = key(i);
        std::sort(s.sorted.begin(), s.sorted.end());
        std::size_t run = 1;
        for (std::size_t i = 1; i <= n; ++i) {
            if (i < n && s.sorted[i] == s.sorted[i - 1]) {
                ++run;
            } else {
                sum += s.c_log2_c[run];
                run = 1;
            }
        }
    }
    const double dn = static_cast<double>(n);
    return std::max(0.0, std::log2(dn) - sum / dn);
}

std::uint64_t key_space_for(std::size_t bin_count, std::size_t rank) {
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        if (space > std::numeric_limits<std::uint64_t>::max() / bin_count) {
            throw Error(ErrorCode::InvalidArgument, "joint key space overflows 64 bits");
        }
        space *= bin_count;
    }
    return space;
}

void check_bin_count(std::size_t bin_count) {
    if (bin_count == 0) throw Error(ErrorCode::DegenerateBins, "bin count must be positive");
}

}  // namespace

std::size_t VariableBins::bin_of(double v) const noexcept {
    if (count <= 1 || !(upper > lower)) return 0;
    const double width = (upper - lower) / static_cast<double>(count);
    const double pos = std::floor((v - lower) / width);
    if (!(pos > 0.0)) return 0;
    if (pos >= static_cast<double>(count - 1)) return count - 1;
    return static_cast<std::size_t>(pos);
}

std::vector<double> VariableBins::edges() const {
    std::vector<double> out(count + 1);
    const double width = (upper - lower) / static_cast<double>(count);
    for (std::size_t i = 0; i <= count; ++i) out[i] = lower + width * static_cast<double>(i);
    out.back() = upper;
    return out;
}

const VariableBins& BinningSpec::for_variable(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return bins[i];
    }
    throw Error(ErrorCode::VariableMismatch, "binning spec does not cover variable '" + name + "'");
}

BinningSpec make_binning(std::span<const TimeSeries> series, std::size_t bin_count) {
    check_bin_count(bin_count);
    BinningSpec spec;
    spec.bin_count = bin_count;
    for (const auto& s : series) {
        if (s.values.empty()) throw Error(ErrorCode::TooShort, "cannot bin empty series '" + s.name + "'");
        const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
        spec.names.push_back(s.name);
        spec.bins.push_back({*lo, *hi, bin_count});
    }
    return spec;
}

BinningSpec make_binning(const Dataset& d, std::size_t bin_count) {
    return make_binning(std::span<const TimeSeries>(d.series), bin_count);
}

double scott_bin_width(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::TooShort, "Scott's rule needs at least one value");
    return 3.5 * sample_stddev(values) / std::cbrt(static_cast<double>(values.size()));
}

std::size_t scott_bin_count(std::span<const double> values) {
    const double width = scott_bin_width(values);
    if (!(width > 0.0)) throw Error(ErrorCode::ZeroVariance, "constant series has zero Scott bin width");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return static_cast<std::size_t>(std::ceil((*hi - *lo) / width));
}

std::size_t system_bin_count(const Dataset& d) {
    if (d.series.empty()) throw Error(ErrorCode::InvalidArgument, "empty dataset");
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& s : d.series) {
        try {
            best = std::min(best, scott_bin_count(s.view()));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroVariance) throw;
            throw Error(ErrorCode::ZeroVariance, "variable '" + s.name + "' is constant");
        }
    }
    if (best < 2) {
        throw Error(ErrorCode::DegenerateBins, "Scott's rule gives " + std::to_string(best) + " bin(s)");
    }
    return best;
}

std::vector<Symbol> discretize(std::span<const double> values, const VariableBins& bins) {
    std::vector<Symbol> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<Symbol>(bins.bin_of(values[i]));
    return out;
}

JointHistogram make_histogram(std::span<const std::span<const Symbol>> coords, std::size_t bin_count,
                              std::vector<std::string> dims) {
    check_bin_count(bin_count);
    if (coords.empty() || coords.size() > 3) {
        throw Error(ErrorCode::InvalidArgument, "histograms cover one to three dimensions");
    }
    const std::size_t n = coords.front().size();
    for (const auto& c : coords) {
        if (c.size() != n) throw Error(ErrorCode::LengthMismatch, "histogram coordinates differ in length");
    }
    if (dims.empty()) {
        for (std::size_t i = 0; i < coords.size(); ++i) dims.push_back("d" + std::to_string(i));
    }
    if (dims.size() != coords.size()) throw Error(ErrorCode::InvalidArgument, "one name per dimension");

    JointHistogram h;
    h.dims = std::move(dims);
    h.bin_count = bin_count;
    h.counts.assign(key_space_for(bin_count, coords.size()), 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t key = 0;
        for (std::size_t d = coords.size(); d-- > 0;) {
            if (coords[d][i] >= bin_count) throw Error(ErrorCode::InvalidArgument, "symbol outside bin range");
            key = key * bin_count + coords[d][i];
        }
        ++h.counts[key];
    }
    h.total = n;
    return h;
}

double shannon_entropy(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw Error(ErrorCode::EmptyHistogram, "entropy of an empty histogram");
    const double dt = static_cast<double>(total);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / dt;
        h -= p * std::log2(p);
    }
    return std::max(0.0, h);
}

double shannon_entropy(const JointHistogram& h) {
    if (h.total == 0) throw Error(ErrorCode::EmptyHistogram, "entropy of an empty histogram");
    return shannon_entropy(std::span<const std::uint64_t>(h.counts));
}

double joint_entropy(std::span<const std::span<const Symbol>> coords, std::size_t bin_count) {
    check_bin_count(bin_count);
    if (coords.empty()) throw Error(ErrorCode::InvalidArgument, "joint entropy of zero variables");
    const std::size_t n = coords.front().size();
    for (const auto& c : coords) {
        if (c.size() != n) throw Error(ErrorCode::LengthMismatch, "joint entropy coordinates differ in length");
    }
    const std::uint64_t space = key_space_for(bin_count, coords.size());
    return entropy_of(n, space, [&](std::size_t i) {
        std::uint64_t key = 0;
        for (std::size_t d = coords.size(); d-- > 0;) key = key * bin_count + coords[d][i];
        return key;
    });
}

double mutual_information(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t bin_count) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "mutual information needs equal lengths");
    const std::span<const Symbol> xs[] = {x};
    const std::span<const Symbol> ys[] = {y};
    const std::span<const Symbol> xy[] = {x, y};
    const double mi = joint_entropy(xs, bin_count) + joint_entropy(ys, bin_count) - joint_entropy(xy, bin_count);
    return std::max(0.0, mi);
}

double mutual_information(const TimeSeries& x, const TimeSeries& y, const BinningSpec& spec) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "mutual information needs equal lengths");
    const auto xs = discretize(x.view(), spec.for_variable(x.name));
    const auto ys = discretize(y.view(), spec.for_variable(y.name));
    return mutual_information(xs, ys, spec.bin_count);
}

double transfer_entropy(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t lag,
                        std::size_t bin_count) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "transfer entropy needs equal lengths");
    LaggedEstimator est(y, lag, bin_count);
    return est.transfer_entropy(x.first(x.size() - lag));
}

double transfer_entropy(const TimeSeries& x, const TimeSeries& y, std::size_t lag, const BinningSpec& spec) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "transfer entropy needs equal lengths");
    const auto xs = discretize(x.view(), spec.for_variable(x.name));
    const auto ys = discretize(y.view(), spec.for_variable(y.name));
    return transfer_entropy(xs, ys, lag, spec.bin_count);
}

LaggedEstimator::LaggedEstimator(std::span<const Symbol> target, std::size_t lag, std::size_t bin_count)
    : lag_(lag), bin_count_(bin_count) {
    check_bin_count(bin_count);
    if (lag == 0) throw Error(ErrorCode::InvalidArgument, "lag must be at least 1");
    if (lag >= target.size()) {
        throw Error(ErrorCode::LagTooLarge, "lag " + std::to_string(lag) + " leaves no samples in a series of length " +
                                                std::to_string(target.size()));
    }
    for (Symbol s : target) {
        if (s >= bin_count) throw Error(ErrorCode::InvalidArgument, "symbol outside bin range");
    }
    const std::size_t n = target.size() - lag;
    target_past_.assign(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(n));
    target_now_.assign(target.begin() + static_cast<std::ptrdiff_t>(lag), target.end());
    past_now_keys_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        past_now_keys_[i] = target_past_[i] + std::uint64_t{bin_count} * target_now_[i];
    }
    const std::uint64_t m = bin_count;
    h_now_ = entropy_of(n, m, [&](std::size_t i) { return target_now_[i]; });
    h_past_ = entropy_of(n, m, [&](std::size_t i) { return target_past_[i]; });
    h_past_now_ = entropy_of(n, m * m, [&](std::size_t i) { return past_now_keys_[i]; });
}

void LaggedEstimator::check(std::span<const Symbol> source_past) const {
    if (source_past.size() != target_now_.size()) {
        throw Error(ErrorCode::LengthMismatch, "aligned source has length " + std::to_string(source_past.size()) +
                                                   ", expected " + std::to_string(target_now_.size()));
    }
    for (Symbol s : source_past) {
        if (s >= bin_count_) throw Error(ErrorCode::InvalidArgument, "symbol outside bin range");
    }
}

double LaggedEstimator::mutual_information(std::span<const Symbol> source_past) const {
    check(source_past);
    const std::uint64_t m = bin_count_;
    const std::size_t n = source_past.size();
    const double h_src = entropy_of(n, m, [&](std::size_t i) { return std::uint64_t{source_past[i]}; });
    const double h_joint =
        entropy_of(n, m * m, [&](std::size_t i) { return source_past[i] + m * target_now_[i]; });
    return std::max(0.0, h_src + h_now_ - h_joint);
}

double LaggedEstimator::transfer_entropy(std::span<const Symbol> source_past) const {
    check(source_past);
    const std::uint64_t m = bin_count_;
    const std::size_t n = source_past.size();
    const double h_src_past =
        entropy_of(n, m * m, [&](std::size_t i) { return source_past[i] + m * target_past_[i]; });
    const double h_all =
        entropy_of(n, key_space_for(bin_count_, 3), [&](std::size_t i) { return source_past[i] + m * past_now_keys_[i]; });
    const double te = -h_past_ + h_src_past + h_past_now_ - h_all;
    return std::max(0.0, te);
}

}  // namespace rcausal
