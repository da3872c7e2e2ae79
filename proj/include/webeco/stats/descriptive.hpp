#pragma once

#include <span>

namespace webeco::stats {

/// Sample Pearson correlation. Throws ArgumentError for unequal lengths or fewer than
/// two points, UndefinedMetricError when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct DurbinWatson {
    double stat = 0.0;
    bool serial_correlation_suspected = false;  // stat outside [1.5, 2.5]
};

inline constexpr double kDurbinWatsonLow = 1.5;
inline constexpr double kDurbinWatsonHigh = 2.5;

/// sum (e_t - e_{t-1})^2 / sum e_t^2. Throws ArgumentError for fewer than two
/// residuals and UndefinedMetricError when all residuals are zero.
DurbinWatson durbin_watson(std::span<const double> residuals);

}  // namespace webeco::stats
