#pragma once

#include <Eigen/Dense>

namespace webeco::stats {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    /// Classical standard errors, sqrt(diag(s^2 (X'X)^-1)) with s^2 = rss / (n - k).
    Eigen::VectorXd std_errors;
};

/// Least squares via column-pivoted QR. Throws SingularityError when X is rank
/// deficient or has no more rows than columns.
OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool with_std_errors = false);

/// Multi-response least squares sharing one design (one column of Y per equation).
/// Returns the coefficient matrix (cols(X) x cols(Y)); residuals written to `residuals`.
Eigen::MatrixXd ols_multi(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Eigen::MatrixXd& residuals);

}  // namespace webeco::stats
