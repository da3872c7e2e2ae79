#include "webeco/causality/var.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "webeco/error.hpp"
#include "webeco/stats/ols.hpp"

namespace webeco::causality {

Eigen::MatrixXd stack_series(const std::vector<std::span<const double>>& series) {
    if (series.empty()) throw ArgumentError("no series given");
    const std::size_t n = series.front().size();
    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(series.size()));
    for (std::size_t j = 0; j < series.size(); ++j) {
        if (series[j].size() != n) throw ArgumentError("series lengths differ");
        for (std::size_t t = 0; t < n; ++t) {
            data(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = series[j][t];
        }
    }
    return data;
}

VarModel fit_var(const Eigen::MatrixXd& data, std::size_t p, std::size_t first_row) {
    const auto n = static_cast<std::size_t>(data.rows());
    const auto k = static_cast<std::size_t>(data.cols());
    if (p == 0) throw ArgumentError("VAR lag order must be at least 1");
    if (k == 0) throw ArgumentError("VAR needs at least one series");
    if (first_row == 0) first_row = p;
    if (first_row < p) throw ArgumentError("first target row precedes the available lags");
    if (n <= k * p + 1 || n <= first_row) {
        throw ArgumentError("VAR(" + std::to_string(p) + ") on " + std::to_string(k) + " series needs more than " +
                            std::to_string(std::max(k * p + 1, first_row)) + " observations (have " +
                            std::to_string(n) + ")");
    }
    const std::size_t rows = n - first_row;
    const auto r = static_cast<Eigen::Index>(rows);
    const auto ki = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd x(r, static_cast<Eigen::Index>(1 + k * p));
    x.col(0).setOnes();
    for (std::size_t i = 1; i <= p; ++i) {
        x.block(0, static_cast<Eigen::Index>(1 + (i - 1) * k), r, ki) =
            data.block(static_cast<Eigen::Index>(first_row - i), 0, r, ki);
    }
    const Eigen::MatrixXd y = data.block(static_cast<Eigen::Index>(first_row), 0, r, ki);

    VarModel model;
    model.p = p;
    model.k = k;
    model.nobs = rows;
    const Eigen::MatrixXd beta = stats::ols_multi(x, y, model.residuals);
    model.intercept = beta.row(0).transpose();
    for (std::size_t i = 1; i <= p; ++i) {
        model.lags.push_back(beta.block(static_cast<Eigen::Index>(1 + (i - 1) * k), 0, ki, ki).transpose());
    }
    model.sigma = model.residuals.transpose() * model.residuals / static_cast<double>(rows);
    return model;
}

double var_bic(const Eigen::MatrixXd& data, std::size_t p, std::size_t p_max) {
    const auto model = fit_var(data, p, p_max);
    const double m = static_cast<double>(model.nobs);
    const double k = static_cast<double>(model.k);
    const double det = model.sigma.determinant();
    if (!(det > 0.0)) throw SingularityError("residual covariance is singular at lag " + std::to_string(p));
    return std::log(det) + std::log(m) / m * (k * k * static_cast<double>(p) + k);
}

std::size_t select_lag_bic(const Eigen::MatrixXd& data, std::size_t p_max) {
    if (p_max == 0) throw ArgumentError("p_max must be at least 1");
    const auto n = static_cast<std::size_t>(data.rows());
    const auto k = static_cast<std::size_t>(data.cols());
    if (n <= k * p_max + 1) {
        throw ArgumentError("lag search up to " + std::to_string(p_max) + " needs more than " +
                            std::to_string(k * p_max + 1) + " observations");
    }
    std::size_t best_p = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= p_max; ++p) {
        const double bic = var_bic(data, p, p_max);
        if (bic < best) {
            best = bic;
            best_p = p;
        }
    }
    return best_p;
}

}  // namespace webeco::causality
