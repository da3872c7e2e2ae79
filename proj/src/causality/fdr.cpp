#include "webeco/causality/fdr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "webeco/error.hpp"

namespace webeco::causality {

namespace {

std::vector<std::size_t> ascending_order(std::span<const double> pvals) {
    for (double p : pvals) {
        if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("p-value outside [0, 1]");
    }
    std::vector<std::size_t> order(pvals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });
    return order;
}

}  // namespace

std::vector<bool> bh_correct(std::span<const double> pvals, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("FDR level Q outside [0, 1]");
    const auto order = ascending_order(pvals);
    const double m = static_cast<double>(pvals.size());
    std::size_t cutoff = 0;  // number of rejections
    for (std::size_t i = order.size(); i >= 1; --i) {
        if (pvals[order[i - 1]] <= static_cast<double>(i) / m * q) {
            cutoff = i;
            break;
        }
    }
    std::vector<bool> reject(pvals.size(), false);
    for (std::size_t i = 0; i < cutoff; ++i) reject[order[i]] = true;
    return reject;
}

std::vector<double> bh_adjusted(std::span<const double> pvals) {
    const auto order = ascending_order(pvals);
    const double m = static_cast<double>(pvals.size());
    std::vector<double> adjusted(pvals.size(), 1.0);
    double running = 1.0;
    for (std::size_t i = order.size(); i >= 1; --i) {
        running = std::min(running, pvals[order[i - 1]] * m / static_cast<double>(i));
        adjusted[order[i - 1]] = running;
    }
    return adjusted;
}

}  // namespace webeco::causality
