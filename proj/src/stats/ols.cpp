#include "webeco/stats/ols.hpp"

#include <string>

#include "webeco/error.hpp"

namespace webeco::stats {

namespace {

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Eigen::MatrixXd& x) {
    if (x.rows() <= x.cols()) {
        throw SingularityError("regression has " + std::to_string(x.rows()) + " rows for " +
                               std::to_string(x.cols()) + " regressors");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    // Scale-aware rank threshold: relative to the largest pivot.
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) {
        throw SingularityError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                               std::to_string(x.cols()) + ")");
    }
    return qr;
}

}  // namespace

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool with_std_errors) {
    const auto qr = checked_qr(x);
    OlsFit fit;
    fit.beta = qr.solve(y);
    fit.residuals = y - x * fit.beta;
    fit.rss = fit.residuals.squaredNorm();
    if (with_std_errors) {
        const double s2 = fit.rss / static_cast<double>(x.rows() - x.cols());
        const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
        fit.std_errors = (s2 * xtx_inv.diagonal().array()).sqrt().matrix();
    }
    return fit;
}

Eigen::MatrixXd ols_multi(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Eigen::MatrixXd& residuals) {
    const auto qr = checked_qr(x);
    Eigen::MatrixXd beta = qr.solve(y);
    residuals = y - x * beta;
    return beta;
}

}  // namespace webeco::stats
