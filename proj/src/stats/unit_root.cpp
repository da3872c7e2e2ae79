#include "webeco/stats/unit_root.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "webeco/error.hpp"
#include "webeco/stats/ols.hpp"
#include "webeco/stats/timeseries.hpp"

namespace webeco::stats {

namespace {

constexpr std::size_t kMinLength = 20;

// Dickey-Fuller 5% critical values (constant; constant + trend) by sample size.
struct CriticalRow {
    double n;
    double constant;
    double trend;
};
constexpr std::array<CriticalRow, 5> kDickeyFuller5 = {{
    {25, -3.00, -3.60},
    {50, -2.93, -3.50},
    {100, -2.89, -3.45},
    {250, -2.88, -3.43},
    {500, -2.87, -3.42},
}};
constexpr double kDickeyFullerAsymptotic5 = -2.86;
constexpr double kDickeyFullerTrendAsymptotic5 = -3.41;

struct AdfDesign {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::Index level_column = 0;
};

// Rows use targets dx_t for t = first..n-1 (indices into x).
AdfDesign adf_design(std::span<const double> x, std::size_t lag, std::size_t first, bool trend) {
    const std::size_t n = x.size();
    const std::size_t rows = n - first;
    const std::size_t deterministic = trend ? 2 : 1;
    AdfDesign d;
    d.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(deterministic + 1 + lag));
    d.y.resize(static_cast<Eigen::Index>(rows));
    d.level_column = static_cast<Eigen::Index>(deterministic);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = first + r;
        const auto row = static_cast<Eigen::Index>(r);
        d.y(row) = x[t] - x[t - 1];
        d.x(row, 0) = 1.0;
        if (trend) d.x(row, 1) = static_cast<double>(t);
        d.x(row, d.level_column) = x[t - 1];
        for (std::size_t i = 1; i <= lag; ++i) {
            d.x(row, d.level_column + static_cast<Eigen::Index>(i)) = x[t - i] - x[t - i - 1];
        }
    }
    return d;
}

bool is_constant(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

double adf_critical_5(std::size_t n, bool trend) {
    const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(n, 1));
    const auto value = [trend](const CriticalRow& r) { return trend ? r.trend : r.constant; };
    if (inv >= 1.0 / kDickeyFuller5.front().n) return value(kDickeyFuller5.front());
    double prev_inv = 0.0;
    double prev_val = trend ? kDickeyFullerTrendAsymptotic5 : kDickeyFullerAsymptotic5;
    for (auto it = kDickeyFuller5.rbegin(); it != kDickeyFuller5.rend(); ++it) {
        const double cur_inv = 1.0 / it->n;
        if (inv <= cur_inv) {
            const double w = (inv - prev_inv) / (cur_inv - prev_inv);
            return prev_val + w * (value(*it) - prev_val);
        }
        prev_inv = cur_inv;
        prev_val = value(*it);
    }
    return value(kDickeyFuller5.front());
}

AdfResult adf_test(std::span<const double> x, const AdfOptions& options) {
    const std::size_t n = x.size();
    if (n < kMinLength) throw ArgumentError("adf_test needs at least 20 observations");
    const std::size_t deterministic = options.trend ? 2 : 1;
    std::size_t max_lag = options.max_lag.value_or(
        static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    // Keep at least 10 residual degrees of freedom.
    while (max_lag > 0 && n < max_lag + 1 + deterministic + 1 + max_lag + 10) --max_lag;

    std::size_t lag = max_lag;
    if (options.auto_lag && max_lag > 0) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l <= max_lag; ++l) {
            const auto design = adf_design(x, l, max_lag + 1, options.trend);
            const auto fit = ols(design.x, design.y);
            const double nobs = static_cast<double>(design.y.size());
            const double bic = nobs * std::log(fit.rss / nobs) + static_cast<double>(design.x.cols()) * std::log(nobs);
            if (bic < best - 1e-12) {
                best = bic;
                lag = l;
            }
        }
    }
    const auto design = adf_design(x, lag, lag + 1, options.trend);
    const auto fit = ols(design.x, design.y, true);
    const double se = fit.std_errors(design.level_column);
    if (!(se > 0.0)) throw SingularityError("adf_test: residual variance is zero");

    AdfResult result;
    result.lag = lag;
    result.nobs = static_cast<std::size_t>(design.y.size());
    result.stat = fit.beta(design.level_column) / se;
    result.critical_5 = adf_critical_5(n, options.trend);
    result.stationary = result.stat < result.critical_5;
    return result;
}

KpssResult kpss_test(std::span<const double> x, std::optional<std::size_t> bandwidth) {
    const std::size_t n = x.size();
    if (n < kMinLength) throw ArgumentError("kpss_test needs at least 20 observations");
    KpssResult result;
    result.bandwidth = bandwidth.value_or(
        static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    result.bandwidth = std::min(result.bandwidth, n - 1);
    const double nd = static_cast<double>(n);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / nd;
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = x[i] - mean;

    double gamma0 = 0.0;
    for (double v : e) gamma0 += v * v;
    gamma0 /= nd;
    if (!(gamma0 > 0.0)) {
        result.stat = 0.0;
        result.stationary = true;
        return result;
    }
    double long_run = gamma0;
    for (std::size_t j = 1; j <= result.bandwidth; ++j) {
        double gamma = 0.0;
        for (std::size_t t = j; t < n; ++t) gamma += e[t] * e[t - j];
        gamma /= nd;
        long_run += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(result.bandwidth + 1)) * gamma;
    }
    double partial = 0.0, sum_sq = 0.0;
    for (double v : e) {
        partial += v;
        sum_sq += partial * partial;
    }
    result.stat = sum_sq / (nd * nd * long_run);
    result.stationary = result.stat <= kKpssLevelCritical5;
    return result;
}

bool passes_stationarity(std::span<const double> x, const AdfOptions& adf) {
    if (is_constant(x)) return true;
    return adf_test(x, adf).stationary && kpss_test(x).stationary;
}

StationarizeResult stationarize(std::span<const double> x, std::size_t max_diff, const AdfOptions& adf) {
    if (x.size() < kMinLength + max_diff) {
        throw ArgumentError("stationarize needs at least " + std::to_string(kMinLength + max_diff) + " observations");
    }
    std::vector<double> current(x.begin(), x.end());
    for (std::size_t d = 0; d <= max_diff; ++d) {
        if (d > 0) current = difference(std::span<const double>(current), 1);
        StationarizeResult result;
        result.differences = d;
        if (is_constant(current)) {
            result.values = current;
            return result;
        }
        try {
            result.adf = adf_test(current, adf);
        } catch (const SingularityError&) {
            continue;  // degenerate regression, e.g. exactly geometric growth
        }
        result.kpss = kpss_test(current);
        if (result.adf.stationary && result.kpss.stationary) {
            result.values = std::move(current);
            return result;
        }
    }
    throw StationarityError("", "no differencing order up to " + std::to_string(max_diff) +
                                    " passes both ADF and KPSS");
}

}  // namespace webeco::stats
