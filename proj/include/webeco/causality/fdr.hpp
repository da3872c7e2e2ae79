#pragma once

#include <span>
#include <vector>

namespace webeco::causality {

/// Benjamini-Hochberg step-up: rejects every hypothesis ranked at or below the
/// largest i with p_(i) <= (i/m) Q. Output follows the input order.
/// Throws ArgumentError for p-values outside [0, 1] or Q outside [0, 1].
std::vector<bool> bh_correct(std::span<const double> pvals, double q = 0.05);

/// BH-adjusted p-values, min over j >= i of m p_(j) / j, capped at 1.
std::vector<double> bh_adjusted(std::span<const double> pvals);

}  // namespace webeco::causality
