#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace webeco::causality {

struct GrangerResult {
    double f_stat = 0.0;
    double p_value = 1.0;
    std::size_t df1 = 0;
    std::size_t df2 = 0;
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
};

/// H0: x does not Granger-cause y. Restricted AR(p) of y against the same
/// regression augmented with p lags of x.
GrangerResult pairwise_granger(std::span<const double> x, std::span<const double> y, std::size_t p);

enum class DirectionSign { Positive, Negative, Indeterminate };

std::string to_string(DirectionSign s);

inline constexpr double kIndeterminateSign = 1e-9;

struct PgcOptions {
    std::size_t lag = 1;
    std::size_t bootstrap = 1000;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

struct PgcResult {
    double f1 = 0.0;
    double p_value = 1.0;
    DirectionSign direction_sign = DirectionSign::Indeterminate;
    double mean_cause_coefficient = 0.0;
    std::size_t lag = 0;
    std::size_t bootstrap_reps = 0;
    std::vector<double> dw_stats;  // unrestricted equations, order x, y, z
    std::vector<bool> dw_flags;

    bool dw_warning() const;
};

/// ln of the ratio of x's residual variance, both partialled on z's residual,
/// between the (x, z) model and the (x, y, z) model.
double partial_granger_f1(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                          std::size_t p);

/// Partial Granger causality of y on x given z, with a residual-permutation
/// bootstrap p-value. Replicate r draws from a generator seeded by (seed, r).
PgcResult partial_granger(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                          const PgcOptions& options);

/// Conditional Granger statistic ln(S_xx / Sigma_xx) without the z-residual
/// correction.
double conditional_granger_f(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                             std::size_t p);

}  // namespace webeco::causality
