#pragma once

// Benchmark systems with known generating equations.
//
//   B:  X(t) = 0.4 Z(t-1)              + e_x
//       Y(t) = 0.6 X(t-3) + 0.09 W(t-2) + e_y
//       Z(t) = 0.7 Y(t-2)              + e_z
//       W(t) = 0.5 X(t-1)              + e_w
//   C:  as B with X(t) = 0.4 Z(t-1)^2 + e_x
//   A:  four independent standard-normal series
//   bivariate-linear:    Y(t) = m X(t-1)   + eps * e
//   bivariate-nonlinear: Y(t) = m X(t-1)^2 + eps * e
//
// All innovations are i.i.d. standard normal, one stream per variable.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rcausal/graph.hpp"
#include "rcausal/timeseries.hpp"

namespace rcausal {

enum class SystemKind { A, B, C, BivariateLinear, BivariateNonlinear };

std::string_view to_string(SystemKind k) noexcept;
SystemKind parse_system_kind(std::string_view s);

struct SystemSpec {
    SystemKind kind = SystemKind::A;
    std::size_t length = 1000;
    // Discarded leading steps for the recursive systems B and C.
    std::size_t burn_in = 100;
    std::uint64_t rng_seed = 0;
    double signal = 0.5;  // m, bivariate kinds only
    double noise = 1.0;   // eps, bivariate kinds only

    void validate() const;
    /// Number of points in the generated dataset.
    std::size_t output_length() const;
};

enum class Transform { Identity, Square };

struct Term {
    std::size_t source = 0;  // variable index
    std::size_t lag = 1;
    double coefficient = 0.0;
    Transform transform = Transform::Identity;
};

// One structural equation per variable: sum of lagged terms plus
// noise_scale times a standard-normal innovation.
struct SystemEquations {
    std::vector<std::string> variables;
    std::vector<std::vector<Term>> terms;
    std::vector<double> noise_scale;
};

SystemEquations system_equations(const SystemSpec& spec);

/// Deterministic part of variable v's equation at time t given the history
/// accessor value(variable, time); times before 0 read as 0.
double equation_mean(const SystemEquations& eq, std::size_t v, std::size_t t,
                     const std::function<double(std::size_t, std::size_t)>& value);

struct TrueLink {
    std::string source;
    std::string target;
    std::size_t lag = 0;
    double coefficient = 0.0;

    LinkKey key() const { return {source, target, lag}; }
    bool operator==(const TrueLink&) const = default;
};

struct GroundTruth {
    std::vector<TrueLink> true_links;
    // Links implied by chains of true links or by a common driver, within
    // the lag horizon used to derive them.
    std::vector<LinkKey> indirect_links;

    bool is_true(const LinkKey& k) const;
    bool is_indirect(const LinkKey& k) const;
};

/// Links explained by composition of true links (total lag <= max_lag) or
/// by a shared upstream driver reaching both ends at lags differing by at
/// most max_lag. True links and self-links are excluded.
std::vector<LinkKey> derive_indirect_links(const std::vector<TrueLink>& truth, std::size_t max_lag);

GroundTruth ground_truth(const SystemSpec& spec, std::size_t max_lag = 4);

struct GeneratedSystem {
    Dataset data;
    GroundTruth truth;
};

GeneratedSystem generate(const SystemSpec& spec);

std::string truth_to_json(const GroundTruth& truth, const SystemSpec& spec);
GroundTruth truth_from_json(std::string_view text);

}  // namespace rcausal
