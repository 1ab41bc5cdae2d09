// Command-line front end: generate, preprocess, analyze, evaluate, sensitivity.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rcausal/ensemble.hpp"
#include "rcausal/error.hpp"
#include "rcausal/evaluation.hpp"
#include "rcausal/graph.hpp"
#include "rcausal/synthetic.hpp"
#include "rcausal/timeseries.hpp"
#include "rcausal/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rcausal;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind { Text, Count, Real, Bool, Seed };

struct FlagDef {
    const char* name;
    Kind kind;
    const char* help;
};

std::string key_of(std::string_view flag) {
    std::string k(flag);
    for (auto& c : k) {
        if (c == '-') c = '_';
    }
    return k;
}

const std::vector<FlagDef> kDataFlags = {
    {"input", Kind::Text, "CSV input (one column per variable)"},
    {"system", Kind::Text, "synthetic system: A, B, C, bivariate-linear, bivariate-nonlinear"},
    {"length", Kind::Count, "generated length before burn-in removal"},
    {"burn-in", Kind::Count, "discarded leading steps for systems B and C"},
    {"m", Kind::Real, "signal coefficient of the bivariate systems"},
    {"eps", Kind::Real, "noise coefficient of the bivariate systems"},
    {"detrend", Kind::Bool, "remove the least-squares linear trend"},
    {"deseasonalize", Kind::Count, "subtract the mean cycle of this period (0: off)"},
};

const std::vector<FlagDef> kSurrogateFlags = {
    {"bins", Kind::Text, "bin count, or auto for Scott's rule"},
    {"surrogates", Kind::Count, "shuffled surrogates per test"},
    {"confidence", Kind::Real, "one-sided t-test confidence"},
    {"te-surrogate-test", Kind::Bool, "also surrogate-test TE after the MI gate"},
};

const std::vector<FlagDef> kGraphFlags = {
    {"method", Kind::Text, "te or gc"},
    {"max-lag", Kind::Count, "largest lag tested"},
    {"gc-alpha", Kind::Real, "F-test significance level"},
    {"gc-lagwise", Kind::Bool, "test the single regressor x(t-p) (off: x(t-1..t-p) jointly)"},
};

const std::vector<FlagDef> kEnsembleFlags = {
    {"subsamples", Kind::Count, "number of subsamples (0: full sample only)"},
    {"sub-length", Kind::Count, "subsample length"},
    {"mode", Kind::Text, "random-continuous, fixed-overlap or nonoverlapping"},
    {"threshold", Kind::Real, "fraction of subsamples a robust link needs"},
    {"reuse-parent-bins", Kind::Bool, "bin subsamples with the full sample's edges"},
};

const std::vector<FlagDef> kEvaluateFlags = {
    {"kind", Kind::Text, "bivariate-linear or bivariate-nonlinear"},
    {"lengths", Kind::Text, "comma-separated data lengths"},
    {"ratios", Kind::Text, "comma-separated m/eps values, or a..b[:n] (n evenly spaced points, default 5)"},
    {"trials", Kind::Count, "Monte Carlo trials per point (at least 100)"},
    {"ensemble-n", Kind::Count, "subsamples in the binomial ensemble model"},
    {"ensemble-k", Kind::Count, "subsamples a link must appear in"},
};

const std::vector<FlagDef> kSensitivityFlags = {
    {"center", Kind::Text, "center bin count, or auto"},
    {"radius", Kind::Count, "bins scanned on each side of the center"},
};

const FlagDef kSeedFlag{"seed", Kind::Seed, "master seed for every stochastic step"};

// Flag values as typed strings until the command knows which ones matter.
struct FlagStore {
    std::map<std::string, std::string> text;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
};

void add_flags(CLI::App& app, FlagStore& store, const std::vector<FlagDef>& defs) {
    for (const auto& def : defs) {
        const std::string name = std::string("--") + def.name;
        const std::string key = key_of(def.name);
        if (def.kind == Kind::Bool) {
            store.options[key] = app.add_flag(name, store.flags[key], def.help);
        } else {
            store.options[key] = app.add_option(name, store.text[key], def.help);
        }
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("--" + key + ": expected a nonnegative integer, got '" + s + "'");
    return v;
}

double parse_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("--" + key + ": expected a number, got '" + s + "'");
    }
    return v;
}

// Overlays the flags given on the command line onto cfg.
void apply_flags(json& cfg, const FlagStore& store, const std::vector<std::vector<FlagDef>>& groups) {
    for (const auto& group : groups) {
        for (const auto& def : group) {
            const std::string key = key_of(def.name);
            if (store.options.at(key)->count() == 0) continue;
            switch (def.kind) {
                case Kind::Bool: cfg[key] = store.flags.at(key); break;
                case Kind::Text: cfg[key] = store.text.at(key); break;
                case Kind::Count:
                case Kind::Seed: cfg[key] = parse_u64(key, store.text.at(key)); break;
                case Kind::Real: cfg[key] = parse_real(key, store.text.at(key)); break;
            }
        }
    }
}

json load_config(const std::string& path, std::string_view command, const std::vector<std::vector<FlagDef>>& groups) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config '" + path + "' must be a JSON object");
    if (cfg.contains("command") && cfg["command"] != command) {
        throw UsageError("config '" + path + "' was written for '" + cfg["command"].get<std::string>() + "'");
    }
    cfg.erase("command");
    cfg.erase("version");
    for (const auto& [key, value] : cfg.items()) {
        bool known = false;
        for (const auto& group : groups) {
            for (const auto& def : group) known = known || key_of(def.name) == key;
        }
        if (!known) throw UsageError("config '" + path + "': unknown key '" + key + "'");
    }
    return cfg;
}

template <class T>
T get(const json& cfg, const std::string& key, T fallback) {
    if (!cfg.contains(key)) return fallback;
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError("config key '" + key + "' has the wrong type");
    }
}

std::optional<std::size_t> get_auto_count(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) return std::nullopt;
    const auto& v = cfg.at(key);
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "auto") return std::nullopt;
        return static_cast<std::size_t>(parse_u64(key, s));
    }
    throw UsageError("config key '" + key + "' must be auto or a count");
}

std::uint64_t require_seed(const json& cfg, std::string_view why) {
    if (!cfg.contains("seed")) throw UsageError("--seed is required (" + std::string(why) + ")");
    return get<std::uint64_t>(cfg, "seed", 0);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_ratios(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        std::vector<double> out;
        for (const auto& item : split(s, ',')) out.push_back(parse_real("ratios", item));
        if (out.empty()) throw UsageError("--ratios: empty list");
        return out;
    }
    std::string hi = s.substr(dots + 2);
    std::size_t n = 5;
    if (const auto colon = hi.find(':'); colon != std::string::npos) {
        n = parse_u64("ratios", hi.substr(colon + 1));
        hi = hi.substr(0, colon);
    }
    const double a = parse_real("ratios", s.substr(0, dots));
    const double b = parse_real("ratios", hi);
    if (n < 2 || !(b > a)) throw UsageError("--ratios: a range needs a < b and at least two points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = std::round(x * 1e12) / 1e12;
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& out) {
    if (out.empty()) throw UsageError("--out is required");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + out + "': " + ec.message());
    return fs::path(out);
}

std::string manifest_text(json cfg, std::string_view command) {
    cfg["command"] = command;
    cfg["version"] = kVersion;
    return cfg.dump(2) + "\n";
}

SystemSpec system_spec(json& cfg, std::uint64_t seed) {
    SystemSpec spec;
    spec.kind = parse_system_kind(get<std::string>(cfg, "system", ""));
    spec.length = get<std::size_t>(cfg, "length", spec.length);
    spec.burn_in = get<std::size_t>(cfg, "burn_in", spec.burn_in);
    spec.signal = get<double>(cfg, "m", spec.signal);
    spec.noise = get<double>(cfg, "eps", spec.noise);
    spec.rng_seed = seed;
    cfg["length"] = spec.length;
    cfg["burn_in"] = spec.burn_in;
    cfg["m"] = spec.signal;
    cfg["eps"] = spec.noise;
    return spec;
}

PreprocessSpec preprocess_spec(json& cfg) {
    PreprocessSpec p;
    p.detrend = get<bool>(cfg, "detrend", false);
    const auto period = get<std::size_t>(cfg, "deseasonalize", 0);
    p.deseasonalize = period > 0;
    if (period > 0) p.season_period = period;
    cfg["detrend"] = p.detrend;
    cfg["deseasonalize"] = period;
    return p;
}

bool has_data_source(const json& cfg) {
    const bool input = cfg.contains("input");
    const bool system = cfg.contains("system");
    if (input == system) throw UsageError("exactly one of --input and --system is required");
    return system;
}

// Loads or generates the dataset and applies preprocessing.
Dataset load_data(json& cfg, std::optional<std::uint64_t> seed) {
    Dataset d;
    if (has_data_source(cfg)) {
        d = generate(system_spec(cfg, *seed)).data;
    } else {
        d = read_csv_file(get<std::string>(cfg, "input", ""));
    }
    const PreprocessSpec p = preprocess_spec(cfg);
    return p.detrend || p.deseasonalize ? preprocess(d, p) : d;
}

void fill_surrogate(json& cfg, SurrogateConfig& s, std::uint64_t seed) {
    s.n_surrogates = get<std::size_t>(cfg, "surrogates", s.n_surrogates);
    s.confidence = get<double>(cfg, "confidence", s.confidence);
    s.te_surrogate_test = get<bool>(cfg, "te_surrogate_test", s.te_surrogate_test);
    s.rng_seed = seed;
    cfg["surrogates"] = s.n_surrogates;
    cfg["confidence"] = s.confidence;
    cfg["te_surrogate_test"] = s.te_surrogate_test;
}

GraphOptions graph_options(json& cfg, std::uint64_t seed) {
    GraphOptions o;
    o.method = parse_method(get<std::string>(cfg, "method", "te"));
    o.max_lag = get<std::size_t>(cfg, "max_lag", o.max_lag);
    o.bins = get_auto_count(cfg, "bins");
    fill_surrogate(cfg, o.surrogate, seed);
    o.granger.alpha = get<double>(cfg, "gc_alpha", o.granger.alpha);
    o.granger.lagwise = get<bool>(cfg, "gc_lagwise", o.granger.lagwise);
    o.granger.order = o.max_lag;
    cfg["method"] = std::string(to_string(o.method));
    cfg["max_lag"] = o.max_lag;
    cfg["bins"] = o.bins ? json(*o.bins) : json("auto");
    cfg["gc_alpha"] = o.granger.alpha;
    cfg["gc_lagwise"] = o.granger.lagwise;
    return o;
}

// The data source, the TE surrogates and random-continuous windows draw
// random numbers; everything else is deterministic.
bool analysis_is_stochastic(const json& cfg) {
    if (cfg.contains("system")) return true;
    if (get<std::string>(cfg, "method", "te") == "te") return true;
    return get<std::size_t>(cfg, "subsamples", 0) > 0 &&
           get<std::string>(cfg, "mode", "random-continuous") == "random-continuous";
}

std::optional<std::uint64_t> seed_if_needed(json& cfg, bool needed, std::string_view why) {
    if (needed) return require_seed(cfg, why);
    if (cfg.contains("seed")) return get<std::uint64_t>(cfg, "seed", 0);
    return std::nullopt;
}

int cmd_generate(json cfg, const std::string& out, const std::string& truth_path) {
    if (!cfg.contains("system")) throw UsageError("--system is required");
    if (out.empty()) throw UsageError("--out is required");
    const std::uint64_t seed = require_seed(cfg, "generation draws noise");
    const SystemSpec spec = system_spec(cfg, seed);
    const GeneratedSystem g = generate(spec);
    write_csv_file(out, g.data);
    if (!truth_path.empty()) write_file(truth_path, truth_to_json(g.truth, spec));
    fs::path manifest(out);
    manifest.replace_extension(".manifest.json");
    write_file(manifest, manifest_text(cfg, "generate"));
    std::cout << "wrote " << out << " (" << g.data.series.size() << " variables, " << g.data.length() << " points)\n";
    return 0;
}

int cmd_preprocess(json cfg, const std::string& out) {
    if (!cfg.contains("input")) throw UsageError("--input is required");
    if (out.empty()) throw UsageError("--out is required");
    const Dataset d = load_data(cfg, std::nullopt);
    write_csv_file(out, d);
    fs::path manifest(out);
    manifest.replace_extension(".manifest.json");
    write_file(manifest, manifest_text(cfg, "preprocess"));
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_analyze(json cfg, const std::string& out) {
    has_data_source(cfg);
    const auto seed = seed_if_needed(cfg, analysis_is_stochastic(cfg), "the analysis draws random numbers");
    const fs::path dir = prepare_out_dir(out);
    const Dataset d = load_data(cfg, seed);
    const GraphOptions opts = graph_options(cfg, seed.value_or(0));

    EnsembleConfig ens;
    ens.n_subsamples = get<std::size_t>(cfg, "subsamples", 0);
    cfg["subsamples"] = ens.n_subsamples;
    if (ens.n_subsamples > 0) {
        ens.subsample_length = get<std::size_t>(cfg, "sub_length", ens.subsample_length);
        ens.mode = parse_subsample_mode(get<std::string>(cfg, "mode", std::string(to_string(ens.mode))));
        ens.threshold = get<double>(cfg, "threshold", ens.threshold);
        ens.reuse_parent_bins = get<bool>(cfg, "reuse_parent_bins", ens.reuse_parent_bins);
        ens.rng_seed = seed.value_or(0);
        cfg["sub_length"] = ens.subsample_length;
        cfg["mode"] = std::string(to_string(ens.mode));
        cfg["threshold"] = ens.threshold;
        cfg["reuse_parent_bins"] = ens.reuse_parent_bins;
    }

    if (ens.n_subsamples == 0) {
        const LaggedCausalGraph g = build_graph(d, opts);
        write_file(dir / "graph.json", to_json(g));
        write_file(dir / "graph.dot", to_dot(g));
        write_file(dir / "manifest.json", manifest_text(cfg, "analyze"));
        std::cout << "full-sample graph: " << g.links.size() << " links\n";
        return 0;
    }
    const EnsembleResult r = run_ensemble(d, opts, ens);
    write_file(dir / "graph.json", to_json(r.full));
    write_file(dir / "graph.dot", to_dot(r.full));
    write_file(dir / "frequencies.csv", r.robust.frequencies.to_csv());
    write_file(dir / "robust_graph.json", to_json(r.robust.graph));
    write_file(dir / "manifest.json", manifest_text(cfg, "analyze"));
    std::cout << "full-sample graph: " << r.full.links.size() << " links; robust graph: " << r.robust.graph.links.size()
              << " links (" << r.subgraphs.size() << " subsamples)\n";
    return 0;
}

int cmd_evaluate(json cfg, const std::string& out) {
    MonteCarloConfig mc;
    mc.rng_seed = require_seed(cfg, "Monte Carlo trials draw random numbers");
    mc.kind = parse_system_kind(get<std::string>(cfg, "kind", std::string(to_string(mc.kind))));
    if (cfg.contains("lengths")) {
        const auto& v = cfg["lengths"];
        mc.lengths.clear();
        if (v.is_string()) {
            for (const auto& item : split(v.get<std::string>(), ',')) mc.lengths.push_back(parse_u64("lengths", item));
        } else {
            mc.lengths = get<std::vector<std::size_t>>(cfg, "lengths", {});
        }
    }
    if (cfg.contains("ratios")) {
        const auto& v = cfg["ratios"];
        mc.ratios = v.is_string() ? parse_ratios(v.get<std::string>()) : get<std::vector<double>>(cfg, "ratios", {});
    }
    mc.n_trials = get<std::size_t>(cfg, "trials", mc.n_trials);
    if (mc.n_trials < 100) throw UsageError("--trials must be at least 100");
    mc.bins = get_auto_count(cfg, "bins");
    fill_surrogate(cfg, mc.surrogate, mc.rng_seed);
    const auto n = get<std::size_t>(cfg, "ensemble_n", 10);
    const auto k_min = get<std::size_t>(cfg, "ensemble_k", 9);
    if (k_min < 1 || k_min > n) throw UsageError("--ensemble-k must lie in [1, ensemble-n]");
    cfg["kind"] = std::string(to_string(mc.kind));
    cfg["lengths"] = mc.lengths;
    cfg["ratios"] = mc.ratios;
    cfg["trials"] = mc.n_trials;
    cfg["bins"] = mc.bins ? json(*mc.bins) : json("auto");
    cfg["ensemble_n"] = n;
    cfg["ensemble_k"] = k_min;

    const fs::path dir = prepare_out_dir(out);
    const ErrorRateCurve curve = monte_carlo_rates(mc);
    write_file(dir / "error_rates.csv", curve.to_csv());

    std::string ens = "data_length,m_over_eps,n,k_min,fnr,fpr,ensemble_fnr_tail,ensemble_fnr_miss,ensemble_fpr\n";
    for (const auto& p : curve.points) {
        ens += std::to_string(p.data_length) + "," + format_double(p.m_over_eps) + "," + std::to_string(n) + "," +
               std::to_string(k_min) + "," + format_double(p.fnr) + "," + format_double(p.fpr) + "," +
               format_double(ensemble_error_binomial(p.fnr, n, k_min)) + "," +
               format_double(ensemble_miss_binomial(p.fnr, n, k_min)) + "," +
               format_double(ensemble_error_binomial(p.fpr, n, k_min)) + "\n";
    }
    write_file(dir / "ensemble_error.csv", ens);
    write_file(dir / "manifest.json", manifest_text(cfg, "evaluate"));
    std::cout << "wrote " << curve.points.size() << " error-rate points to " << (dir / "error_rates.csv").string() << "\n";
    return 0;
}

int cmd_sensitivity(json cfg, const std::string& out) {
    has_data_source(cfg);
    const std::uint64_t seed = require_seed(cfg, "TE surrogates draw random numbers");
    const fs::path dir = prepare_out_dir(out);
    const Dataset d = load_data(cfg, seed);
    cfg["method"] = "te";
    GraphOptions opts = graph_options(cfg, seed);
    const auto center_opt = get_auto_count(cfg, "center");
    const std::size_t center = center_opt ? *center_opt : resolve_bin_count(d, opts);
    const auto radius = get<std::size_t>(cfg, "radius", 2);
    cfg["center"] = center_opt ? json(center) : json("auto");
    cfg["radius"] = radius;

    const SensitivityReport report = bin_sensitivity_scan(d, center, radius, opts);
    write_file(dir / "sensitivity.csv", report.to_csv());
    for (const auto& e : report.entries) {
        write_file(dir / ("graph_bins_" + std::to_string(e.bins) + ".json"), to_json(e.graph));
    }
    for (const char* key : {"method", "gc_alpha", "gc_lagwise"}) cfg.erase(key);
    write_file(dir / "manifest.json", manifest_text(cfg, "sensitivity"));
    std::cout << "center " << center << " bins, radius " << radius << ": " << (report.stable() ? "stable" : "links change")
              << "\n";
    return 0;
}

void report_error(const Error& e) {
    json j;
    j["error"] = std::string(to_string(e.code()));
    j["message"] = e.what();
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal-link discovery with transfer entropy, Granger causality and subsample ensembles"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    struct Command {
        CLI::App* app;
        FlagStore store;
        std::vector<std::vector<FlagDef>> groups;
        std::string config;
        std::string out;
        std::string truth;
    };
    std::map<std::string, Command> commands;
    const auto add_command = [&](const std::string& name, const std::string& help,
                                 std::vector<std::vector<FlagDef>> groups) -> Command& {
        Command& c = commands[name];
        c.app = app.add_subcommand(name, help);
        groups.push_back({kSeedFlag});
        c.groups = std::move(groups);
        for (const auto& g : c.groups) add_flags(*c.app, c.store, g);
        c.app->add_option("--config", c.config, "JSON config; flags override its values");
        return c;
    };

    std::vector<FlagDef> generate_flags(kDataFlags.begin() + 1, kDataFlags.begin() + 6);
    auto& gen = add_command("generate", "write a synthetic system as CSV", {generate_flags});
    gen.app->add_option("--out", gen.out, "CSV output path");
    gen.app->add_option("--truth", gen.truth, "ground-truth JSON output path");

    const std::vector<FlagDef> prep_flags = {kDataFlags[0], kDataFlags[6], kDataFlags[7]};
    auto& prep = add_command("preprocess", "detrend and deseasonalize a CSV", {prep_flags});
    prep.app->add_option("--out", prep.out, "CSV output path");

    auto& analyze = add_command("analyze", "build the causal graph, optionally with a subsample ensemble",
                                {kDataFlags, kGraphFlags, kSurrogateFlags, kEnsembleFlags});
    analyze.app->add_option("--out", analyze.out, "output directory");

    auto& evaluate = add_command("evaluate", "Monte Carlo error rates of the bivariate systems",
                                 {kEvaluateFlags, kSurrogateFlags});
    evaluate.app->add_option("--out", evaluate.out, "output directory");

    const std::vector<FlagDef> sens_graph = {kGraphFlags[1]};
    auto& sens = add_command("sensitivity", "TE graphs across bin counts around the center",
                             {kDataFlags, sens_graph, kSurrogateFlags, kSensitivityFlags});
    sens.app->add_option("--out", sens.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [name, c] : commands) {
            if (!c.app->parsed()) continue;
            json cfg = c.config.empty() ? json::object() : load_config(c.config, name, c.groups);
            apply_flags(cfg, c.store, c.groups);
            if (name == "generate") return cmd_generate(std::move(cfg), c.out, c.truth);
            if (name == "preprocess") return cmd_preprocess(std::move(cfg), c.out);
            if (name == "analyze") return cmd_analyze(std::move(cfg), c.out);
            if (name == "evaluate") return cmd_evaluate(std::move(cfg), c.out);
            if (name == "sensitivity") return cmd_sensitivity(std::move(cfg), c.out);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) {
            std::cerr << "usage error: " << e.what() << "\n";
            return 2;
        }
        report_error(e);
        return 1;
    } catch (const std::exception& e) {
        json j;
        j["error"] = "Internal";
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    }
    return 2;
}
