#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace webeco::causality {

/// Least-squares vector autoregression with intercept.
///
/// Equation r reads  y_r(t) = c_r + sum_i sum_j A_i(r, j) y_j(t - i) + e_r(t).
struct VarModel {
    std::size_t p = 0;
    std::size_t k = 0;
    std::vector<Eigen::MatrixXd> lags;  // A_1 .. A_p, each k x k
    Eigen::VectorXd intercept;          // c, length k
    Eigen::MatrixXd residuals;          // nobs x k
    Eigen::MatrixXd sigma;              // residuals' residuals / nobs
    std::size_t nobs = 0;

    /// Coefficient of series `cause` at lag i (1-based) in the equation of `effect`.
    double coefficient(std::size_t effect, std::size_t cause, std::size_t lag) const {
        return lags[lag - 1](static_cast<Eigen::Index>(effect), static_cast<Eigen::Index>(cause));
    }
};

/// Columns are series, rows are time points.
Eigen::MatrixXd stack_series(const std::vector<std::span<const double>>& series);

/// Fits VAR(p) on rows [first_row, n) as targets (first_row >= p; default p).
/// Throws ArgumentError unless n > k p + 1 and SingularityError when the lagged
/// design is rank deficient.
VarModel fit_var(const Eigen::MatrixXd& data, std::size_t p, std::size_t first_row = 0);

/// argmin over p in [1, p_max] of ln det(sigma_p) + ln(m)/m (k^2 p + k), with every
/// candidate fitted on the same m = n - p_max target rows. Ties go to the smaller p.
std::size_t select_lag_bic(const Eigen::MatrixXd& data, std::size_t p_max = 14);

/// Value of the criterion for one p on the common sample (exposed for diagnostics).
double var_bic(const Eigen::MatrixXd& data, std::size_t p, std::size_t p_max);

}  // namespace webeco::causality
