#include "rcausal/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "rcausal/error.hpp"
#include "rcausal/random.hpp"

namespace rcausal {

using nlohmann::json;

std::string_view to_string(SystemKind k) noexcept {
    switch (k) {
        case SystemKind::A: return "A";
        case SystemKind::B: return "B";
        case SystemKind::C: return "C";
        case SystemKind::BivariateLinear: return "bivariate-linear";
        case SystemKind::BivariateNonlinear: return "bivariate-nonlinear";
    }
    return "A";
}

SystemKind parse_system_kind(std::string_view s) {
    if (s == "A") return SystemKind::A;
    if (s == "B") return SystemKind::B;
    if (s == "C") return SystemKind::C;
    if (s == "bivariate-linear") return SystemKind::BivariateLinear;
    if (s == "bivariate-nonlinear") return SystemKind::BivariateNonlinear;
    throw Error(ErrorCode::InvalidArgument, "unknown system '" + std::string(s) + "'");
}

namespace {

bool is_bivariate(SystemKind k) {
    return k == SystemKind::BivariateLinear || k == SystemKind::BivariateNonlinear;
}

bool is_recursive(SystemKind k) { return k == SystemKind::B || k == SystemKind::C; }

// Steps simulated ahead of the returned window.
std::size_t lead_steps(const SystemSpec& spec) {
    if (is_recursive(spec.kind)) return spec.burn_in;
    if (is_bivariate(spec.kind)) return 1;  // the first Y has no X(t-1)
    return 0;
}

}  // namespace

void SystemSpec::validate() const {
    if (length == 0) throw Error(ErrorCode::InvalidArgument, "system length must be positive");
    if (is_recursive(kind) && length <= burn_in) {
        throw Error(ErrorCode::InvalidArgument, "system length must exceed the burn-in");
    }
    if (is_bivariate(kind)) {
        if (!(noise > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise coefficient must be positive");
        if (!std::isfinite(signal)) throw Error(ErrorCode::InvalidArgument, "signal coefficient must be finite");
    }
}

std::size_t SystemSpec::output_length() const {
    return is_recursive(kind) ? length - burn_in : length;
}

SystemEquations system_equations(const SystemSpec& spec) {
    SystemEquations eq;
    enum { X, Y, Z, W };
    switch (spec.kind) {
        case SystemKind::A:
            eq.variables = {"X", "Y", "Z", "W"};
            eq.terms.assign(4, {});
            eq.noise_scale.assign(4, 1.0);
            break;
        case SystemKind::B:
        case SystemKind::C: {
            const Transform x_form = spec.kind == SystemKind::C ? Transform::Square : Transform::Identity;
            eq.variables = {"X", "Y", "Z", "W"};
            eq.terms = {
                {{Z, 1, 0.4, x_form}},
                {{X, 3, 0.6, Transform::Identity}, {W, 2, 0.09, Transform::Identity}},
                {{Y, 2, 0.7, Transform::Identity}},
                {{X, 1, 0.5, Transform::Identity}},
            };
            eq.noise_scale.assign(4, 1.0);
            break;
        }
        case SystemKind::BivariateLinear:
        case SystemKind::BivariateNonlinear: {
            const Transform form =
                spec.kind == SystemKind::BivariateNonlinear ? Transform::Square : Transform::Identity;
            eq.variables = {"X", "Y"};
            eq.terms = {{}, {{X, 1, spec.signal, form}}};
            eq.noise_scale = {1.0, spec.noise};
            break;
        }
    }
    return eq;
}

double equation_mean(const SystemEquations& eq, std::size_t v, std::size_t t,
                     const std::function<double(std::size_t, std::size_t)>& value) {
    double sum = 0.0;
    for (const auto& term : eq.terms.at(v)) {
        if (term.lag > t) continue;  // pre-sample history is zero
        const double x = value(term.source, t - term.lag);
        sum += term.coefficient * (term.transform == Transform::Square ? x * x : x);
    }
    return sum;
}

bool GroundTruth::is_true(const LinkKey& k) const {
    return std::any_of(true_links.begin(), true_links.end(), [&](const TrueLink& l) { return l.key() == k; });
}

bool GroundTruth::is_indirect(const LinkKey& k) const {
    return std::find(indirect_links.begin(), indirect_links.end(), k) != indirect_links.end();
}

std::vector<LinkKey> derive_indirect_links(const std::vector<TrueLink>& truth, std::size_t max_lag) {
    // reach[(from, to)] = set of total lags of directed paths, with the
    // number of edges (1 or "2 or more") tracked separately.
    using Reach = std::map<std::pair<std::string, std::string>, std::set<std::size_t>>;
    const std::size_t horizon = 3 * max_lag;

    Reach direct;
    for (const auto& l : truth) direct[{l.source, l.target}].insert(l.lag);

    Reach any = direct;
    Reach chained;  // paths with at least two edges
    for (bool grew = true; grew;) {
        grew = false;
        Reach next = any;
        for (const auto& [ab, lags_ab] : any) {
            for (const auto& l : truth) {
                if (l.source != ab.second) continue;
                for (std::size_t lag : lags_ab) {
                    const std::size_t total = lag + l.lag;
                    if (total > horizon) continue;
                    chained[{ab.first, l.target}].insert(total);
                    if (next[{ab.first, l.target}].insert(total).second) grew = true;
                }
            }
        }
        any = std::move(next);
    }

    std::set<LinkKey> out;
    for (const auto& [ab, lags] : chained) {
        if (ab.first == ab.second) continue;
        for (std::size_t lag : lags) {
            if (lag >= 1 && lag <= max_lag) out.insert({ab.first, ab.second, lag});
        }
    }
    // Common driver: D reaches A at a and B at b > a, so A appears to lead B
    // by b - a.
    for (const auto& [da, lags_a] : any) {
        for (const auto& [db, lags_b] : any) {
            if (da.first != db.first || da.second == db.second) continue;
            for (std::size_t a : lags_a) {
                for (std::size_t b : lags_b) {
                    if (b > a && b - a <= max_lag) out.insert({da.second, db.second, b - a});
                }
            }
        }
    }
    std::vector<LinkKey> result;
    for (const auto& k : out) {
        const bool is_true = std::any_of(truth.begin(), truth.end(), [&](const TrueLink& l) { return l.key() == k; });
        if (!is_true) result.push_back(k);
    }
    return result;
}

GroundTruth ground_truth(const SystemSpec& spec, std::size_t max_lag) {
    const SystemEquations eq = system_equations(spec);
    GroundTruth truth;
    for (std::size_t v = 0; v < eq.variables.size(); ++v) {
        for (const auto& term : eq.terms[v]) {
            if (term.coefficient == 0.0) continue;
            truth.true_links.push_back({eq.variables[term.source], eq.variables[v], term.lag, term.coefficient});
        }
    }
    std::sort(truth.true_links.begin(), truth.true_links.end(),
              [](const TrueLink& a, const TrueLink& b) { return a.key() < b.key(); });
    truth.indirect_links = derive_indirect_links(truth.true_links, max_lag);
    return truth;
}

namespace {

// System C's quadratic feedback (X -> Y -> Z -> X through Z^2) escapes to
// infinity in roughly half of all 1000-step draws. Bounded draws stay well
// below this level; escaping ones pass it within a few cycles.
constexpr double kEscapeBound = 25.0;
constexpr std::uint64_t kMaxAttempts = 1000;

std::vector<std::vector<double>> simulate(const SystemEquations& eq, std::size_t steps, std::uint64_t seed) {
    const std::size_t k = eq.variables.size();
    std::vector<std::vector<double>> values(k, std::vector<double>(steps, 0.0));
    std::vector<std::mt19937_64> streams;
    streams.reserve(k);
    for (std::size_t v = 0; v < k; ++v) streams.emplace_back(derive_seed({seed, v}));
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto value = [&](std::size_t v, std::size_t t) { return values[v][t]; };
    for (std::size_t t = 0; t < steps; ++t) {
        // Right-hand sides only read times before t, so variable order
        // within a step does not matter.
        for (std::size_t v = 0; v < k; ++v) {
            values[v][t] = equation_mean(eq, v, t, value) + eq.noise_scale[v] * normal(streams[v]);
        }
    }
    return values;
}

bool bounded(const std::vector<std::vector<double>>& values) {
    for (const auto& series : values) {
        for (double x : series) {
            if (!(std::abs(x) <= kEscapeBound)) return false;
        }
    }
    return true;
}

}  // namespace

GeneratedSystem generate(const SystemSpec& spec) {
    spec.validate();
    const SystemEquations eq = system_equations(spec);
    const std::size_t lead = lead_steps(spec);
    const std::size_t steps = spec.output_length() + lead;

    // Attempt 0 uses the seed as given; recursive systems redraw from
    // (seed, attempt) until the realization stays bounded.
    std::vector<std::vector<double>> values = simulate(eq, steps, spec.rng_seed);
    if (is_recursive(spec.kind)) {
        std::uint64_t attempt = 0;
        while (!bounded(values)) {
            if (++attempt == kMaxAttempts) {
                throw Error(ErrorCode::NonFinite, "system " + std::string(to_string(spec.kind)) +
                                                      " diverged in every attempt");
            }
            values = simulate(eq, steps, derive_seed({spec.rng_seed, attempt}));
        }
    }

    GeneratedSystem out;
    for (std::size_t v = 0; v < eq.variables.size(); ++v) {
        out.data.series.push_back(
            {eq.variables[v], std::vector<double>(values[v].begin() + static_cast<std::ptrdiff_t>(lead), values[v].end())});
    }
    out.truth = ground_truth(spec);
    return out;
}

std::string truth_to_json(const GroundTruth& truth, const SystemSpec& spec) {
    json links = json::array();
    for (const auto& l : truth.true_links) {
        links.push_back({{"source", l.source}, {"target", l.target}, {"lag", l.lag}, {"coefficient", l.coefficient}});
    }
    json indirect = json::array();
    for (const auto& l : truth.indirect_links) {
        indirect.push_back({{"source", l.source}, {"target", l.target}, {"lag", l.lag}});
    }
    json j;
    j["system"] = std::string(to_string(spec.kind));
    j["true_links"] = std::move(links);
    j["indirect_links"] = std::move(indirect);
    return j.dump(2) + "\n";
}

GroundTruth truth_from_json(std::string_view text) {
    GroundTruth truth;
    try {
        const json j = json::parse(text);
        for (const auto& l : j.at("true_links")) {
            truth.true_links.push_back({l.at("source").get<std::string>(), l.at("target").get<std::string>(),
                                        l.at("lag").get<std::size_t>(), l.at("coefficient").get<double>()});
        }
        if (j.contains("indirect_links")) {
            for (const auto& l : j.at("indirect_links")) {
                truth.indirect_links.push_back(
                    {l.at("source").get<std::string>(), l.at("target").get<std::string>(), l.at("lag").get<std::size_t>()});
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("invalid ground-truth JSON: ") + e.what());
    }
    return truth;
}

}  // namespace rcausal
