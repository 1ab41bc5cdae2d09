#include "rcausal/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>

#include "rcausal/error.hpp"
#include "rcausal/estimators.hpp"
#include "rcausal/parallel.hpp"
#include "rcausal/random.hpp"

namespace rcausal {

double ConfusionCounts::fnr() const noexcept {
    return (fn + tp) == 0 ? 0.0 : static_cast<double>(fn) / static_cast<double>(fn + tp);
}

double ConfusionCounts::fpr() const noexcept {
    return (fp + tn) == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(fp + tn);
}

const ErrorRatePoint* ErrorRateCurve::find(std::size_t data_length, double m_over_eps) const {
    for (const auto& p : points) {
        if (p.data_length == data_length && std::abs(p.m_over_eps - m_over_eps) < 1e-12) return &p;
    }
    return nullptr;
}

std::string ErrorRateCurve::to_csv() const {
    std::ostringstream out;
    out << "data_length,m_over_eps,fnr,fpr,n_trials\n";
    for (const auto& p : points) {
        out << p.data_length << ',' << format_double(p.m_over_eps) << ',' << format_double(p.fnr) << ','
            << format_double(p.fpr) << ',' << p.n_trials << '\n';
    }
    return out.str();
}

void MonteCarloConfig::validate() const {
    if (kind != SystemKind::BivariateLinear && kind != SystemKind::BivariateNonlinear) {
        throw Error(ErrorCode::InvalidArgument, "error-rate studies use the bivariate systems");
    }
    if (n_trials < 100) throw Error(ErrorCode::InvalidArgument, "at least 100 trials per point are required");
    if (lengths.empty() || ratios.empty()) throw Error(ErrorCode::InvalidArgument, "no lengths or ratios given");
    for (auto l : lengths) {
        if (l < 20) throw Error(ErrorCode::InvalidArgument, "data length " + std::to_string(l) + " is too short");
    }
    for (double r : ratios) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "ratios must be finite and >= 0");
    }
    surrogate.validate();
}

ErrorRateCurve monte_carlo_rates(const MonteCarloConfig& cfg) {
    cfg.validate();
    ErrorRateCurve curve;
    for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
        for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
            std::vector<char> missed(cfg.n_trials, 0);
            std::vector<char> false_alarm(cfg.n_trials, 0);
            parallel_for(cfg.n_trials, [&](std::size_t trial) {
                SystemSpec spec;
                spec.kind = cfg.kind;
                spec.length = cfg.lengths[li];
                spec.signal = cfg.ratios[ri];
                spec.noise = 1.0;
                spec.rng_seed = derive_seed({cfg.rng_seed, cfg.lengths[li], ri, trial});
                const Dataset d = generate(spec).data;

                const std::size_t m = cfg.bins ? *cfg.bins : system_bin_count(d);
                const BinningSpec bins = make_binning(d, m);
                const auto x = discretize(d.series[0].view(), bins.bins[0]);
                const auto y = discretize(d.series[1].view(), bins.bins[1]);
                SurrogateConfig sc = cfg.surrogate;
                sc.rng_seed = derive_seed({spec.rng_seed, 0x7e57ULL});
                missed[trial] = !te_link_test(x, y, 1, m, sc, 1).link;
                false_alarm[trial] = te_link_test(x, y, 2, m, sc, 2).link;
            });
            const double n = static_cast<double>(cfg.n_trials);
            const auto fn = std::count(missed.begin(), missed.end(), 1);
            const auto fp = std::count(false_alarm.begin(), false_alarm.end(), 1);
            curve.points.push_back({cfg.lengths[li], cfg.ratios[ri], static_cast<double>(fn) / n,
                                    static_cast<double>(fp) / n, cfg.n_trials});
        }
    }
    return curve;
}

namespace {

double binomial_upper_tail(double p, std::size_t n, std::size_t k_min) {
    double sum = 0.0;
    for (std::size_t i = k_min; i <= n; ++i) {
        const double c = boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(i));
        sum += c * std::pow(p, static_cast<double>(i)) * std::pow(1.0 - p, static_cast<double>(n - i));
    }
    return std::clamp(sum, 0.0, 1.0);
}

void check_binomial_args(double e_s, std::size_t n, std::size_t k_min) {
    if (!(e_s >= 0.0 && e_s <= 1.0)) throw Error(ErrorCode::InvalidArgument, "error rate must lie in [0, 1]");
    if (k_min < 1 || k_min > n) throw Error(ErrorCode::InvalidArgument, "need 1 <= k_min <= n");
}

}  // namespace

double ensemble_error_binomial(double e_s, std::size_t n, std::size_t k_min) {
    check_binomial_args(e_s, n, k_min);
    return binomial_upper_tail(e_s, n, k_min);
}

double ensemble_miss_binomial(double e_s, std::size_t n, std::size_t k_min) {
    check_binomial_args(e_s, n, k_min);
    return binomial_upper_tail(e_s, n, n - k_min + 1);
}

ConfusionCounts score_against_truth(const LaggedCausalGraph& inferred, const GroundTruth& truth,
                                    bool exclude_indirect) {
    const std::set<std::string> vars(inferred.variables.begin(), inferred.variables.end());
    for (const auto& l : truth.true_links) {
        if (!vars.count(l.source) || !vars.count(l.target)) {
            throw Error(ErrorCode::VariableMismatch, "ground truth references variable outside the graph");
        }
    }
    ConfusionCounts c;
    for (const auto& s : inferred.variables) {
        for (const auto& t : inferred.variables) {
            if (s == t) continue;
            for (std::size_t lag = 1; lag <= inferred.max_lag; ++lag) {
                const LinkKey key{s, t, lag};
                const bool detected = inferred.contains(key);
                if (truth.is_true(key)) {
                    ++(detected ? c.tp : c.fn);
                } else if (!detected) {
                    ++c.tn;
                } else if (exclude_indirect && truth.is_indirect(key)) {
                    ++c.indirect;
                } else {
                    ++c.fp;
                }
            }
        }
    }
    return c;
}

bool SensitivityReport::stable() const noexcept {
    return std::all_of(entries.begin(), entries.end(), [](const SensitivityEntry& e) { return e.jaccard == 1.0; });
}

std::string SensitivityReport::to_csv() const {
    std::ostringstream out;
    out << "bins,links,jaccard\n";
    for (const auto& e : entries) {
        out << e.bins << ',' << e.graph.links.size() << ',' << format_double(e.jaccard) << '\n';
    }
    return out.str();
}

SensitivityReport bin_sensitivity_scan(const Dataset& d, std::size_t center_bins, std::size_t radius,
                                       GraphOptions opts) {
    if (center_bins < radius + 2) throw Error(ErrorCode::DegenerateBins, "center - radius must be at least 2");
    opts.method = Method::TransferEntropy;
    opts.binning.reset();
    SensitivityReport report;
    report.center_bins = center_bins;
    for (std::size_t m = center_bins - radius; m <= center_bins + radius; ++m) {
        opts.bins = m;
        report.entries.push_back({m, build_graph(d, opts), 1.0});
    }
    const auto& center = report.entries[radius].graph;
    for (auto& e : report.entries) e.jaccard = jaccard(e.graph, center);
    return report;
}

}  // namespace rcausal
