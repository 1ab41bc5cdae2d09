#include "rcausal/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include "rcausal/error.hpp"

namespace rcausal {

namespace {

constexpr double kMaxGramCondition = 1e10;

struct OlsFit {
    double rss = 0.0;
};

// Column 0 is the intercept. The remaining columns are centered and every
// column scaled to unit norm before solving; this reparameterization leaves
// the residuals unchanged and makes the condition number a collinearity
// measure independent of units and offsets.
OlsFit fit_ols(Eigen::MatrixXd design, const Eigen::VectorXd& response, bool check_condition) {
    for (Eigen::Index c = 1; c < design.cols(); ++c) {
        design.col(c).array() -= design.col(c).mean();
    }
    for (Eigen::Index c = 0; c < design.cols(); ++c) {
        const double norm = design.col(c).norm();
        if (!(norm > 0.0)) {
            throw Error(ErrorCode::SingularDesign, "a regressor is constant over the fitting window");
        }
        design.col(c) /= norm;
    }
    const Eigen::MatrixXd gram = design.transpose() * design;
    if (check_condition) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
            throw Error(ErrorCode::SingularDesign, "regressors are collinear (Gram condition number exceeds 1e10)");
        }
    }
    const Eigen::VectorXd beta = gram.ldlt().solve(design.transpose() * response);
    const Eigen::VectorXd resid = response - design * beta;
    return {resid.squaredNorm()};
}

}  // namespace

void GrangerConfig::validate() const {
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "Granger order must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
}

double f_test_p_value(double f, std::size_t d1, std::size_t d2) {
    if (d1 == 0 || d2 == 0) throw Error(ErrorCode::InvalidArgument, "F distribution needs positive degrees of freedom");
    if (!(f > 0.0)) return 1.0;
    if (std::isinf(f)) return 0.0;
    boost::math::fisher_f dist(static_cast<double>(d1), static_cast<double>(d2));
    return boost::math::cdf(boost::math::complement(dist, f));
}

GrangerResult granger_test(std::span<const double> x, std::span<const double> y, std::size_t p,
                           const GrangerConfig& cfg) {
    cfg.validate();
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "Granger test needs equal lengths");
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "Granger lag must be at least 1");
    const std::size_t l = y.size();
    if (l <= 2 * p + 1) {
        throw Error(ErrorCode::TooShort, "series of length " + std::to_string(l) + " is too short for lag " +
                                             std::to_string(p));
    }
    for (std::size_t i = 0; i < l; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw Error(ErrorCode::NonFinite, "Granger test input contains a non-finite value");
        }
    }

    const std::size_t n = l - p;
    const std::size_t k = cfg.lagwise ? 1 : p;
    const std::size_t reduced_params = 1 + p;
    const std::size_t full_params = reduced_params + k;
    if (n <= full_params) {
        throw Error(ErrorCode::TooShort, "not enough observations for " + std::to_string(full_params) + " parameters");
    }

    Eigen::MatrixXd full(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(full_params));
    Eigen::VectorXd response(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t i = r + p;
        const auto row = static_cast<Eigen::Index>(r);
        response(row) = y[i];
        full(row, 0) = 1.0;
        for (std::size_t j = 1; j <= p; ++j) full(row, static_cast<Eigen::Index>(j)) = y[i - j];
        if (cfg.lagwise) {
            full(row, static_cast<Eigen::Index>(reduced_params)) = x[i - p];
        } else {
            for (std::size_t j = 1; j <= p; ++j) {
                full(row, static_cast<Eigen::Index>(reduced_params + j - 1)) = x[i - j];
            }
        }
    }

    const OlsFit f = fit_ols(full, response, true);
    const OlsFit r = fit_ols(full.leftCols(static_cast<Eigen::Index>(reduced_params)), response, false);

    GrangerResult out;
    out.rss_full = f.rss;
    out.rss_reduced = r.rss;
    out.df_numerator = k;
    out.df_denominator = n - full_params;
    const double gain = std::max(0.0, r.rss - f.rss);
    if (f.rss > 0.0) {
        out.f_statistic = (gain / static_cast<double>(k)) / (f.rss / static_cast<double>(out.df_denominator));
    } else {
        out.f_statistic = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    out.p_value = f_test_p_value(out.f_statistic, out.df_numerator, out.df_denominator);
    out.link = out.p_value < cfg.alpha;
    return out;
}

}  // namespace rcausal
