#include "webeco/causality/granger.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/fisher_f.hpp>

#include "webeco/causality/var.hpp"
#include "webeco/error.hpp"
#include "webeco/parallel.hpp"
#include "webeco/stats/descriptive.hpp"
#include "webeco/stats/ols.hpp"

namespace webeco::causality {

namespace {

using Eigen::Index;

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b) throw ArgumentError("series lengths differ");
}

// [1, lags 1..p of each listed series] for target rows p..n-1.
Eigen::MatrixXd lag_design(const std::vector<std::span<const double>>& series, std::size_t p) {
    const std::size_t n = series.front().size();
    const std::size_t rows = n - p;
    Eigen::MatrixXd x(static_cast<Index>(rows), static_cast<Index>(1 + series.size() * p));
    x.col(0).setOnes();
    Index col = 1;
    for (const auto& s : series) {
        for (std::size_t i = 1; i <= p; ++i, ++col) {
            for (std::size_t t = p; t < n; ++t) x(static_cast<Index>(t - p), col) = s[t - i];
        }
    }
    return x;
}

// Variance of residual a after projecting out residual c, from a covariance matrix.
double partial_variance(const Eigen::MatrixXd& cov, Index a, Index c) {
    const double czz = cov(c, c);
    if (!(czz > 0.0)) throw SingularityError("conditioning series has zero residual variance");
    return cov(a, a) - cov(a, c) * cov(c, a) / czz;
}

double f1_from(const Eigen::MatrixXd& restricted_data, const Eigen::MatrixXd& full_data, std::size_t p) {
    const auto restricted = fit_var(restricted_data, p);  // columns x, z
    const auto full = fit_var(full_data, p);              // columns x, y, z
    const double num = partial_variance(restricted.sigma, 0, 1);
    const double den = partial_variance(full.sigma, 0, 2);
    if (!(num > 0.0) || !(den > 0.0)) throw SingularityError("partial residual variance is not positive");
    return std::log(num / den);
}

Eigen::MatrixXd columns(std::initializer_list<std::span<const double>> series) {
    return stack_series(std::vector<std::span<const double>>(series));
}

std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t replicate) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

std::string to_string(DirectionSign s) {
    switch (s) {
        case DirectionSign::Positive: return "positive";
        case DirectionSign::Negative: return "negative";
        case DirectionSign::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

bool PgcResult::dw_warning() const {
    return std::any_of(dw_flags.begin(), dw_flags.end(), [](bool b) { return b; });
}

GrangerResult pairwise_granger(std::span<const double> x, std::span<const double> y, std::size_t p) {
    check_lengths(x.size(), y.size());
    if (p == 0) throw ArgumentError("lag order must be at least 1");
    const std::size_t n = y.size();
    if (n <= 3 * p + 1) throw ArgumentError("too few observations for the requested lag");
    const std::size_t n_eff = n - p;

    Eigen::VectorXd target(static_cast<Index>(n_eff));
    for (std::size_t t = p; t < n; ++t) target(static_cast<Index>(t - p)) = y[t];

    const auto restricted = stats::ols(lag_design({y}, p), target);
    const auto unrestricted = stats::ols(lag_design({y, x}, p), target);

    GrangerResult r;
    r.df1 = p;
    r.df2 = n_eff - 2 * p - 1;
    r.rss_restricted = restricted.rss;
    r.rss_unrestricted = unrestricted.rss;
    if (!(r.rss_unrestricted > 0.0)) throw SingularityError("unrestricted model fits exactly");
    // Nested least squares: RSS_u <= RSS_r up to rounding.
    const double gain = std::max(0.0, r.rss_restricted - r.rss_unrestricted);
    r.f_stat = (gain / static_cast<double>(r.df1)) / (r.rss_unrestricted / static_cast<double>(r.df2));
    boost::math::fisher_f dist(static_cast<double>(r.df1), static_cast<double>(r.df2));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.f_stat));
    return r;
}

double partial_granger_f1(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                          std::size_t p) {
    check_lengths(x.size(), y.size());
    check_lengths(x.size(), z.size());
    return f1_from(columns({x, z}), columns({x, y, z}), p);
}

double conditional_granger_f(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                             std::size_t p) {
    check_lengths(x.size(), y.size());
    check_lengths(x.size(), z.size());
    const auto restricted = fit_var(columns({x, z}), p);
    const auto full = fit_var(columns({x, y, z}), p);
    return std::log(restricted.sigma(0, 0) / full.sigma(0, 0));
}

PgcResult partial_granger(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                          const PgcOptions& options) {
    check_lengths(x.size(), y.size());
    check_lengths(x.size(), z.size());
    if (options.lag == 0) throw ArgumentError("lag order must be at least 1");
    if (options.bootstrap == 0) throw ArgumentError("bootstrap needs at least one replicate");
    const std::size_t p = options.lag;
    const std::size_t n = x.size();

    const Eigen::MatrixXd restricted_data = columns({x, z});
    Eigen::MatrixXd full_data = columns({x, y, z});

    PgcResult result;
    result.lag = p;
    result.bootstrap_reps = options.bootstrap;
    result.f1 = f1_from(restricted_data, full_data, p);

    const auto full = fit_var(full_data, p);
    double coef_sum = 0.0;
    for (std::size_t i = 1; i <= p; ++i) coef_sum += full.coefficient(0, 1, i);
    result.mean_cause_coefficient = coef_sum / static_cast<double>(p);
    if (std::abs(result.mean_cause_coefficient) < kIndeterminateSign) {
        result.direction_sign = DirectionSign::Indeterminate;
    } else {
        result.direction_sign =
            result.mean_cause_coefficient > 0.0 ? DirectionSign::Positive : DirectionSign::Negative;
    }
    for (Index eq = 0; eq < full.residuals.cols(); ++eq) {
        const Eigen::VectorXd e = full.residuals.col(eq);
        const auto dw = stats::durbin_watson(std::span<const double>(e.data(), static_cast<std::size_t>(e.size())));
        result.dw_stats.push_back(dw.stat);
        result.dw_flags.push_back(dw.serial_correlation_suspected);
    }

    // Null model: x driven by its own and z's history only.
    const auto restricted = fit_var(restricted_data, p);
    const Eigen::VectorXd innovations = restricted.residuals.col(0);
    const double cx = restricted.intercept(0);

    std::vector<double> replicate_f1(options.bootstrap);
    parallel_for(options.bootstrap, options.jobs, [&](std::size_t r) {
        auto rng = replicate_rng(options.seed, r);
        std::vector<double> e(innovations.data(), innovations.data() + innovations.size());
        for (std::size_t i = e.size(); i > 1; --i) std::swap(e[i - 1], e[rng() % i]);

        std::vector<double> xs(x.begin(), x.end());
        for (std::size_t t = p; t < n; ++t) {
            double v = cx + e[t - p];
            for (std::size_t i = 1; i <= p; ++i) {
                v += restricted.coefficient(0, 0, i) * xs[t - i] + restricted.coefficient(0, 1, i) * z[t - i];
            }
            xs[t] = v;
        }
        replicate_f1[r] = partial_granger_f1(xs, y, z, p);
    });
    const auto exceed = std::count_if(replicate_f1.begin(), replicate_f1.end(),
                                      [&](double f) { return f >= result.f1; });
    result.p_value = static_cast<double>(1 + exceed) / static_cast<double>(options.bootstrap + 1);
    return result;
}

}  // namespace webeco::causality
