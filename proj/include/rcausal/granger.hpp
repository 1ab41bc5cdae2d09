#pragma once

// Bivariate Granger causality: nested autoregressions compared with an
// F-test.

#include <cstddef>
#include <span>

#include "rcausal/timeseries.hpp"

namespace rcausal {

struct GrangerConfig {
    // Largest lag considered when building GC graphs.
    std::size_t order = 4;
    double alpha = 0.05;
    // Lagwise: the tested lag p adds the single regressor x[i - p].
    // Cumulative: x[i - 1] ... x[i - p] (p restrictions).
    bool lagwise = true;

    void validate() const;
};

struct GrangerResult {
    double f_statistic = 0.0;
    double p_value = 1.0;
    double rss_full = 0.0;
    double rss_reduced = 0.0;
    std::size_t df_numerator = 0;
    std::size_t df_denominator = 0;
    bool link = false;
};

/// Survival function of the F(d1, d2) distribution at f (p = 1 at f = 0).
double f_test_p_value(double f, std::size_t d1, std::size_t d2);

/// Does x Granger-cause y at lag p? Both models regress y[i] on an
/// intercept and y[i - 1 .. i - p] over the same window i in [p, l); the
/// full model adds the x terms. Throws TooShort when l <= 2p + 1 and
/// SingularDesign when the full Gram matrix is numerically singular.
GrangerResult granger_test(std::span<const double> x, std::span<const double> y, std::size_t p,
                           const GrangerConfig& cfg);
inline GrangerResult granger_test(const TimeSeries& x, const TimeSeries& y, std::size_t p,
                                  const GrangerConfig& cfg) {
    return granger_test(x.view(), y.view(), p, cfg);
}

}  // namespace rcausal
