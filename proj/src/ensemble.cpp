#include "rcausal/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "rcausal/error.hpp"
#include "rcausal/estimators.hpp"
#include "rcausal/random.hpp"

namespace rcausal {

std::string_view to_string(SubsampleMode m) noexcept {
    switch (m) {
        case SubsampleMode::RandomContinuous: return "random-continuous";
        case SubsampleMode::FixedOverlap: return "fixed-overlap";
        case SubsampleMode::NonOverlapping: return "nonoverlapping";
    }
    return "random-continuous";
}

SubsampleMode parse_subsample_mode(std::string_view s) {
    if (s == "random-continuous") return SubsampleMode::RandomContinuous;
    if (s == "fixed-overlap") return SubsampleMode::FixedOverlap;
    if (s == "nonoverlapping") return SubsampleMode::NonOverlapping;
    throw Error(ErrorCode::InvalidArgument, "unknown subsample mode '" + std::string(s) + "'");
}

void EnsembleConfig::validate(std::size_t data_length) const {
    if (n_subsamples < 1) throw Error(ErrorCode::InvalidArgument, "at least one subsample is required");
    if (subsample_length < 1) throw Error(ErrorCode::InvalidArgument, "subsample length must be positive");
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
    }
    if (subsample_length >= data_length) {
        throw Error(ErrorCode::WindowTooLong, "subsample length " + std::to_string(subsample_length) +
                                                  " must be shorter than the data (" + std::to_string(data_length) + ")");
    }
    if (mode == SubsampleMode::NonOverlapping && n_subsamples * subsample_length > data_length) {
        throw Error(ErrorCode::TooManyWindows, std::to_string(n_subsamples) + " disjoint windows of " +
                                                   std::to_string(subsample_length) + " do not fit in " +
                                                   std::to_string(data_length) + " points");
    }
}

std::vector<std::size_t> subsample_starts(std::size_t data_length, const EnsembleConfig& cfg) {
    cfg.validate(data_length);
    const std::size_t n = cfg.n_subsamples;
    const std::size_t last = data_length - cfg.subsample_length;
    std::vector<std::size_t> starts(n);
    for (std::size_t j = 0; j < n; ++j) {
        switch (cfg.mode) {
            case SubsampleMode::RandomContinuous: {
                SplitMix64 rng(derive_seed({cfg.rng_seed, j}));
                starts[j] = static_cast<std::size_t>(uniform_below(rng, last + 1));
                break;
            }
            case SubsampleMode::FixedOverlap:
                // Rounded to nearest; n = 3 gives first, middle and last.
                starts[j] = n == 1 ? 0 : (j * last * 2 + (n - 1)) / (2 * (n - 1));
                break;
            case SubsampleMode::NonOverlapping:
                starts[j] = j * cfg.subsample_length;
                break;
        }
    }
    return starts;
}

std::vector<Dataset> draw_subsamples(const Dataset& d, const EnsembleConfig& cfg) {
    std::vector<Dataset> out;
    for (std::size_t start : subsample_starts(d.length(), cfg)) out.push_back(d.window(start, cfg.subsample_length));
    return out;
}

const LinkFrequency* LinkFrequencyTable::find(const LinkKey& k) const {
    const auto it = std::lower_bound(entries.begin(), entries.end(), k,
                                     [](const LinkFrequency& e, const LinkKey& key) { return e.key < key; });
    return (it != entries.end() && it->key == k) ? &*it : nullptr;
}

double LinkFrequencyTable::fraction(const LinkKey& k) const {
    const auto* e = find(k);
    return e ? e->fraction : 0.0;
}

std::string LinkFrequencyTable::to_csv() const {
    std::ostringstream out;
    out << "source,target,lag,count,fraction\n";
    for (const auto& e : entries) {
        out << e.key.source << ',' << e.key.target << ',' << e.key.lag << ',' << e.count << ','
            << format_double(e.fraction) << '\n';
    }
    return out.str();
}

LinkFrequencyTable link_frequencies(std::span<const LaggedCausalGraph> subgraphs) {
    if (subgraphs.empty()) throw Error(ErrorCode::InvalidArgument, "no subgraphs to aggregate");
    const auto first = subgraphs.front().canonical();
    LinkFrequencyTable table;
    table.variables = first.variables;
    table.max_lag = first.max_lag;
    table.method = first.method;
    table.n_subsamples = subgraphs.size();

    std::map<LinkKey, std::pair<std::size_t, double>> tally;
    for (const auto& s : table.variables) {
        for (const auto& t : table.variables) {
            if (s == t) continue;
            for (std::size_t lag = 1; lag <= table.max_lag; ++lag) tally[{s, t, lag}] = {0, 0.0};
        }
    }
    for (const auto& g : subgraphs) {
        auto vars = g.variables;
        std::sort(vars.begin(), vars.end());
        if (vars != table.variables || g.max_lag != table.max_lag || g.method != table.method) {
            throw Error(ErrorCode::VariableMismatch, "subgraphs differ in variables, max_lag or method");
        }
        for (const auto& l : g.links) {
            if (!l.significant) continue;
            auto it = tally.find(l.key());
            if (it == tally.end()) throw Error(ErrorCode::VariableMismatch, "link outside the candidate set");
            ++it->second.first;
            it->second.second += l.strength;
        }
    }
    const double n = static_cast<double>(subgraphs.size());
    for (const auto& [key, v] : tally) {
        const double mean = v.first ? v.second / static_cast<double>(v.first) : 0.0;
        table.entries.push_back({key, v.first, static_cast<double>(v.first) / n, mean});
    }
    return table;
}

std::size_t required_count(double threshold, std::size_t n) {
    // The epsilon absorbs representation error such as 0.9 * 100 = 90.000...01.
    return static_cast<std::size_t>(std::ceil(threshold * static_cast<double>(n) - 1e-9));
}

RobustGraph robust_graph(const LinkFrequencyTable& freq, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
    }
    RobustGraph out;
    out.frequencies = freq;
    out.threshold = threshold;
    out.graph.variables = freq.variables;
    out.graph.max_lag = freq.max_lag;
    out.graph.method = freq.method;
    const std::size_t need = std::max<std::size_t>(1, required_count(threshold, freq.n_subsamples));
    for (const auto& e : freq.entries) {
        if (e.count >= need) {
            out.graph.links.push_back({e.key.source, e.key.target, e.key.lag, e.mean_strength, true});
        }
    }
    return out;
}

EnsembleResult run_ensemble(const Dataset& d, const GraphOptions& opts, const EnsembleConfig& cfg) {
    EnsembleResult result;
    result.starts = subsample_starts(d.length(), cfg);
    result.full = build_graph(d, opts);

    GraphOptions sub_opts = opts;
    if (cfg.reuse_parent_bins && opts.method == Method::TransferEntropy && !opts.binning) {
        sub_opts.binning = make_binning(d, resolve_bin_count(d, opts));
    }
    result.subgraphs.reserve(result.starts.size());
    for (std::size_t j = 0; j < result.starts.size(); ++j) {
        sub_opts.surrogate.rng_seed = derive_seed({opts.surrogate.rng_seed, j, 0x5ab5ULL});
        result.subgraphs.push_back(build_graph(d.window(result.starts[j], cfg.subsample_length), sub_opts));
    }
    result.robust = robust_graph(link_frequencies(result.subgraphs), cfg.threshold);
    return result;
}

}  // namespace rcausal
