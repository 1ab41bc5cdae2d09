#include "rcausal/significance.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "rcausal/error.hpp"

namespace rcausal {

namespace {

enum Stage : std::uint64_t { kMiStage = 1, kTeStage = 2 };

// Runs `estimate` on n independent shuffles of `source`, realization r
// drawing from its own stream.
template <typename Estimate>
std::vector<double> surrogate_values(std::span<const Symbol> source, const SurrogateConfig& cfg,
                                     std::uint64_t stream, Stage stage, Estimate estimate) {
    std::vector<double> out(cfg.n_surrogates);
    std::vector<Symbol> shuffled(source.begin(), source.end());
    for (std::size_t r = 0; r < cfg.n_surrogates; ++r) {
        SplitMix64 rng(derive_seed({cfg.rng_seed, stream, stage, r}));
        shuffled.assign(source.begin(), source.end());
        shuffle_in_place(std::span<Symbol>(shuffled), rng);
        out[r] = estimate(std::span<const Symbol>(shuffled));
    }
    return out;
}

}  // namespace

void SurrogateConfig::validate() const {
    if (n_surrogates < 2) throw Error(ErrorCode::InvalidArgument, "at least two surrogates are required");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
    }
}

TimeSeries shuffle_surrogate(const TimeSeries& s, SplitMix64& rng) {
    TimeSeries out = s;
    shuffle_in_place(std::span<double>(out.values), rng);
    return out;
}

double critical_value(double confidence, std::size_t n_surrogates) {
    if (n_surrogates < 2) throw Error(ErrorCode::InvalidArgument, "at least two surrogates are required");
    thread_local double cached_conf = -1.0;
    thread_local std::size_t cached_n = 0;
    thread_local double cached = 0.0;
    if (confidence != cached_conf || n_surrogates != cached_n) {
        boost::math::students_t dist(static_cast<double>(n_surrogates - 1));
        cached = boost::math::quantile(dist, confidence);
        cached_conf = confidence;
        cached_n = n_surrogates;
    }
    return cached;
}

SignificanceResult decide(double observed, std::span<const double> surrogates, double confidence) {
    SignificanceResult r;
    r.observed = observed;
    r.surrogate_mean = mean(surrogates);
    r.surrogate_std = sample_stddev(surrogates);
    if (r.surrogate_std > 0.0) {
        r.statistic = (observed - r.surrogate_mean) / r.surrogate_std;
        r.significant = r.statistic > critical_value(confidence, surrogates.size());
    } else {
        r.significant = observed > r.surrogate_mean;
        r.statistic = r.significant ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return r;
}

SignificanceResult mi_significance(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t bin_count,
                                   const SurrogateConfig& cfg, std::uint64_t stream) {
    cfg.validate();
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "mutual information needs equal lengths");
    const double observed = mutual_information(x, y, bin_count);
    const auto null = surrogate_values(x, cfg, stream, kMiStage, [&](std::span<const Symbol> xs) {
        return mutual_information(xs, y, bin_count);
    });
    return decide(observed, null, cfg.confidence);
}

SignificanceResult mi_significance(const TimeSeries& x, const TimeSeries& y, const BinningSpec& spec,
                                   const SurrogateConfig& cfg) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "mutual information needs equal lengths");
    const auto xs = discretize(x.view(), spec.for_variable(x.name));
    const auto ys = discretize(y.view(), spec.for_variable(y.name));
    return mi_significance(xs, ys, spec.bin_count, cfg);
}

LinkTestResult te_link_test(std::span<const Symbol> x, std::span<const Symbol> y, std::size_t lag,
                            std::size_t bin_count, const SurrogateConfig& cfg, std::uint64_t stream) {
    cfg.validate();
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "transfer entropy needs equal lengths");
    const LaggedEstimator est(y, lag, bin_count);
    const auto source_past = x.first(est.effective_length());

    LinkTestResult result;
    const auto mi_null = surrogate_values(source_past, cfg, stream, kMiStage, [&](std::span<const Symbol> xs) {
        return est.mutual_information(xs);
    });
    result.mi = decide(est.mutual_information(source_past), mi_null, cfg.confidence);
    if (!result.mi.significant) return result;

    result.te = est.transfer_entropy(source_past);
    if (!cfg.te_surrogate_test) {
        result.link = true;
        return result;
    }
    const auto te_null = surrogate_values(source_past, cfg, stream, kTeStage, [&](std::span<const Symbol> xs) {
        return est.transfer_entropy(xs);
    });
    result.te_test = decide(result.te, te_null, cfg.confidence);
    result.link = result.te_test->significant;
    return result;
}

LinkTestResult te_link_test(const TimeSeries& x, const TimeSeries& y, std::size_t lag, const BinningSpec& spec,
                            const SurrogateConfig& cfg, std::uint64_t stream) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "transfer entropy needs equal lengths");
    const auto xs = discretize(x.view(), spec.for_variable(x.name));
    const auto ys = discretize(y.view(), spec.for_variable(y.name));
    return te_link_test(xs, ys, lag, spec.bin_count, cfg, stream);
}

}  // namespace rcausal
