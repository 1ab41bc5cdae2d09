#include "rcausal/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rcausal/error.hpp"
#include "rcausal/estimators.hpp"
#include "rcausal/parallel.hpp"
#include "rcausal/random.hpp"

namespace rcausal {

using nlohmann::json;

std::string_view to_string(Method m) noexcept {
    return m == Method::Granger ? "gc" : "te";
}

Method parse_method(std::string_view s) {
    if (s == "te") return Method::TransferEntropy;
    if (s == "gc") return Method::Granger;
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(s) + "' (expected te or gc)");
}

std::string to_string(const LinkKey& k) {
    return k.source + "->" + k.target + "@" + std::to_string(k.lag);
}

bool LaggedCausalGraph::contains(const LinkKey& k) const { return find(k) != nullptr; }

const CausalLink* LaggedCausalGraph::find(const LinkKey& k) const {
    for (const auto& l : links) {
        if (l.lag == k.lag && l.source == k.source && l.target == k.target) return &l;
    }
    return nullptr;
}

std::vector<LinkKey> LaggedCausalGraph::keys() const {
    std::vector<LinkKey> out;
    out.reserve(links.size());
    for (const auto& l : links) out.push_back(l.key());
    std::sort(out.begin(), out.end());
    return out;
}

LaggedCausalGraph LaggedCausalGraph::canonical() const {
    LaggedCausalGraph g = *this;
    std::sort(g.variables.begin(), g.variables.end());
    std::sort(g.links.begin(), g.links.end(),
              [](const CausalLink& a, const CausalLink& b) { return a.key() < b.key(); });
    return g;
}

void LaggedCausalGraph::validate() const {
    const std::set<std::string> vars(variables.begin(), variables.end());
    if (vars.size() != variables.size()) throw Error(ErrorCode::DuplicateName, "graph has duplicate variables");
    std::set<LinkKey> seen;
    for (const auto& l : links) {
        if (!vars.count(l.source) || !vars.count(l.target)) {
            throw Error(ErrorCode::VariableMismatch, "link " + to_string(l.key()) + " references an unknown variable");
        }
        if (l.source == l.target) throw Error(ErrorCode::InvalidArgument, "self-link " + to_string(l.key()));
        if (l.lag < 1 || l.lag > max_lag) {
            throw Error(ErrorCode::InvalidArgument, "link " + to_string(l.key()) + " lag outside [1, max_lag]");
        }
        if (!seen.insert(l.key()).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate link " + to_string(l.key()));
        }
    }
}

bool operator==(const LaggedCausalGraph& a, const LaggedCausalGraph& b) {
    const auto ca = a.canonical();
    const auto cb = b.canonical();
    return ca.variables == cb.variables && ca.max_lag == cb.max_lag && ca.method == cb.method &&
           ca.links == cb.links;
}

std::size_t resolve_bin_count(const Dataset& d, const GraphOptions& opts) {
    if (opts.bins) {
        if (*opts.bins < 2) throw Error(ErrorCode::DegenerateBins, "at least two bins are required");
        return *opts.bins;
    }
    // Constant variables carry no information and are binned into a single
    // cell, so they do not take part in the Scott minimum.
    std::optional<std::size_t> best;
    for (const auto& s : d.series) {
        if (sample_stddev(s.view()) > 0.0) {
            const std::size_t m = scott_bin_count(s.view());
            best = best ? std::min(*best, m) : m;
        }
    }
    if (!best) throw Error(ErrorCode::ZeroVariance, "every variable is constant");
    if (*best < 2) throw Error(ErrorCode::DegenerateBins, "Scott's rule gives " + std::to_string(*best) + " bin(s)");
    return *best;
}

std::vector<CausalLink> evaluate_candidates(const Dataset& d, const GraphOptions& opts) {
    const std::size_t k = d.variable_count();
    const std::size_t l = d.length();
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "a graph needs at least two variables");
    if (opts.max_lag < 1) throw Error(ErrorCode::InvalidArgument, "max_lag must be at least 1");
    if (opts.max_lag * 4 >= l) {
        throw Error(ErrorCode::TooShort, "max_lag " + std::to_string(opts.max_lag) + " is too large for length " +
                                             std::to_string(l) + " (need max_lag < length / 4)");
    }

    struct Candidate {
        std::size_t source;
        std::size_t target;
        std::size_t lag;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(k * (k - 1) * opts.max_lag);
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            if (s == t) continue;
            for (std::size_t lag = 1; lag <= opts.max_lag; ++lag) candidates.push_back({s, t, lag});
        }
    }

    std::vector<CausalLink> out(candidates.size());
    if (opts.method == Method::TransferEntropy) {
        opts.surrogate.validate();
        const BinningSpec spec = opts.binning ? *opts.binning : make_binning(d, resolve_bin_count(d, opts));
        const std::size_t m = spec.bin_count;
        std::vector<std::vector<Symbol>> symbols;
        symbols.reserve(k);
        for (const auto& s : d.series) symbols.push_back(discretize(s.view(), spec.for_variable(s.name)));

        parallel_for(candidates.size(), [&](std::size_t i) {
            const auto& c = candidates[i];
            const std::uint64_t stream = derive_seed({c.source, c.target, c.lag});
            const auto r = te_link_test(symbols[c.source], symbols[c.target], c.lag, m, opts.surrogate, stream);
            out[i] = {d.series[c.source].name, d.series[c.target].name, c.lag, r.te, r.link};
        });
    } else {
        opts.granger.validate();
        parallel_for(candidates.size(), [&](std::size_t i) {
            const auto& c = candidates[i];
            CausalLink link{d.series[c.source].name, d.series[c.target].name, c.lag, 0.0, false};
            try {
                const auto r = granger_test(d.series[c.source], d.series[c.target], c.lag, opts.granger);
                link.strength = r.f_statistic;
                link.significant = r.link;
            } catch (const Error& e) {
                // A collinear design (e.g. a constant variable) cannot show
                // any predictive gain.
                if (e.code() != ErrorCode::SingularDesign) throw;
            }
            out[i] = std::move(link);
        });
    }
    return out;
}

LaggedCausalGraph build_graph(const Dataset& d, const GraphOptions& opts) {
    LaggedCausalGraph g;
    g.variables = d.names();
    g.max_lag = opts.max_lag;
    g.method = opts.method;
    for (auto& c : evaluate_candidates(d, opts)) {
        if (c.significant) g.links.push_back(std::move(c));
    }
    return g;
}

std::string to_json(const LaggedCausalGraph& g) {
    const auto c = g.canonical();
    json links = json::array();
    for (const auto& l : c.links) {
        json strength = std::isfinite(l.strength) ? json(l.strength) : json(nullptr);
        links.push_back({{"source", l.source},
                         {"target", l.target},
                         {"lag", l.lag},
                         {"strength", strength},
                         {"significant", l.significant}});
    }
    json j;
    j["method"] = std::string(to_string(c.method));
    j["max_lag"] = c.max_lag;
    j["variables"] = c.variables;
    j["links"] = std::move(links);
    return j.dump(2) + "\n";
}

LaggedCausalGraph graph_from_json(std::string_view text) {
    LaggedCausalGraph g;
    try {
        const json j = json::parse(text);
        g.method = parse_method(j.at("method").get<std::string>());
        g.max_lag = j.at("max_lag").get<std::size_t>();
        g.variables = j.at("variables").get<std::vector<std::string>>();
        for (const auto& l : j.at("links")) {
            CausalLink link;
            link.source = l.at("source").get<std::string>();
            link.target = l.at("target").get<std::string>();
            link.lag = l.at("lag").get<std::size_t>();
            link.strength = l.at("strength").is_null() ? std::numeric_limits<double>::infinity()
                                                       : l.at("strength").get<double>();
            link.significant = l.at("significant").get<bool>();
            g.links.push_back(std::move(link));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("invalid graph JSON: ") + e.what());
    }
    g.validate();
    return g;
}

namespace {

std::string dot_id(const std::string& name) {
    const bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name.front())) &&
                       std::all_of(name.begin(), name.end(), [](char ch) {
                           return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
                       });
    if (plain) return name;
    std::string out = "\"";
    for (char ch : name) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string to_dot(const LaggedCausalGraph& g) {
    const auto c = g.canonical();
    std::ostringstream out;
    out << "digraph causal {\n";
    for (const auto& v : c.variables) out << "  " << dot_id(v) << ";\n";
    for (const auto& l : c.links) {
        out << "  " << dot_id(l.source) << " -> " << dot_id(l.target) << " [label=\"lag " << l.lag << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_csv(const LaggedCausalGraph& g) {
    const auto c = g.canonical();
    std::ostringstream out;
    out << "source,target,lag,strength,significant\n";
    for (const auto& l : c.links) {
        out << l.source << ',' << l.target << ',' << l.lag << ',' << format_double(l.strength) << ','
            << (l.significant ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string export_graph(const LaggedCausalGraph& g, std::string_view format) {
    if (format == "json") return to_json(g);
    if (format == "dot") return to_dot(g);
    if (format == "csv") return to_csv(g);
    throw Error(ErrorCode::UnknownFormat, "unknown export format '" + std::string(format) + "'");
}

GraphDiff diff_graphs(const LaggedCausalGraph& a, const LaggedCausalGraph& b) {
    const std::set<std::string> va(a.variables.begin(), a.variables.end());
    const std::set<std::string> vb(b.variables.begin(), b.variables.end());
    if (va != vb) throw Error(ErrorCode::VariableMismatch, "graphs are over different variables");
    GraphDiff diff;
    for (const auto& l : a.canonical().links) {
        (b.contains(l.key()) ? diff.both : diff.only_a).push_back(l);
    }
    for (const auto& l : b.canonical().links) {
        if (!a.contains(l.key())) diff.only_b.push_back(l);
    }
    return diff;
}

double jaccard(const LaggedCausalGraph& a, const LaggedCausalGraph& b) {
    const auto d = diff_graphs(a, b);
    const std::size_t uni = d.only_a.size() + d.only_b.size() + d.both.size();
    return uni == 0 ? 1.0 : static_cast<double>(d.both.size()) / static_cast<double>(uni);
}

}  // namespace rcausal
