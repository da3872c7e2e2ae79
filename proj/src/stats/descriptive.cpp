#include "webeco/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "webeco/error.hpp"

namespace webeco::stats {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("pearson: inputs differ in length");
    if (x.size() < 2) throw ArgumentError("pearson: need at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw UndefinedMetricError("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DurbinWatson durbin_watson(std::span<const double> residuals) {
    if (residuals.size() < 2) throw ArgumentError("durbin_watson: need at least two residuals");
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < residuals.size(); ++t) {
        den += residuals[t] * residuals[t];
        if (t > 0) {
            const double d = residuals[t] - residuals[t - 1];
            num += d * d;
        }
    }
    if (!(den > 0.0)) throw UndefinedMetricError("durbin_watson: all residuals are zero");
    DurbinWatson dw;
    dw.stat = num / den;
    dw.serial_correlation_suspected = dw.stat < kDurbinWatsonLow || dw.stat > kDurbinWatsonHigh;
    return dw;
}

}  // namespace webeco::stats
