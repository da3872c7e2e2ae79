#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace webeco::stats {

struct AdfOptions {
    /// Fixed number of lagged differences; nullopt selects 0..12(n/100)^(1/4) by BIC.
    std::optional<std::size_t> max_lag;
    bool auto_lag = true;
    /// Adds a linear time trend to the test regression (constant-only by default).
    bool trend = false;
};

struct AdfResult {
    double stat = 0.0;         // t-statistic of the lagged level
    double critical_5 = 0.0;   // interpolated 5% critical value
    bool stationary = false;   // unit root rejected at 5%
    std::size_t lag = 0;
    std::size_t nobs = 0;
};

/// Augmented Dickey-Fuller test of
///   dx_t = a + g x_{t-1} + sum_i f_i dx_{t-i} + e_t
/// Throws ArgumentError for fewer than 20 points and SingularityError for a degenerate
/// regression (e.g. a constant series).
AdfResult adf_test(std::span<const double> x, const AdfOptions& options = {});

/// 5% Dickey-Fuller critical value for a sample of size n, interpolated in 1/n
/// between the tabulated sizes 25, 50, 100, 250, 500 and the asymptote.
double adf_critical_5(std::size_t n, bool trend);

struct KpssResult {
    double stat = 0.0;
    double critical_5 = 0.463;
    bool stationary = true;  // level stationarity not rejected at 5%
    std::size_t bandwidth = 0;
};

inline constexpr double kKpssLevelCritical5 = 0.463;

/// KPSS level-stationarity test, Newey-West long-run variance with a Bartlett kernel.
/// Default bandwidth floor(4 (n/100)^(1/4)). A zero-variance series returns stat 0.
/// Throws ArgumentError for fewer than 20 points.
KpssResult kpss_test(std::span<const double> x, std::optional<std::size_t> bandwidth = std::nullopt);

struct StationarizeResult {
    std::vector<double> values;
    std::size_t differences = 0;
    AdfResult adf;
    KpssResult kpss;
};

/// Smallest d <= max_diff whose d-th difference is rejected as a unit root by ADF and
/// accepted as level-stationary by KPSS. A series that is constant after d
/// differences counts as stationary. Throws StationarityError when no d passes and
/// ArgumentError when x has fewer than 20 + max_diff points.
StationarizeResult stationarize(std::span<const double> x, std::size_t max_diff = 2,
                                const AdfOptions& adf = {});

/// True iff both tests agree the series is stationary.
bool passes_stationarity(std::span<const double> x, const AdfOptions& adf = {});

}  // namespace webeco::stats
