#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace webeco::scoring {

enum class FringeLabel { Misinformation, Authentic };

std::string to_string(FringeLabel l);
FringeLabel parse_fringe_label(const std::string& text);

struct FringeSample {
    std::string domain;
    double partisanship = 0.0;    // [-1, 1]
    double conspiracy_pct = 0.0;  // [0, 100]
    FringeLabel label = FringeLabel::Authentic;
};

enum class CalibrationMode { Platt, Simplified };

std::string to_string(CalibrationMode m);
CalibrationMode parse_calibration_mode(const std::string& text);

struct FringeModel {
    std::array<double, 2> w{0.0, 0.0};
    double b = 0.0;
    std::array<double, 2> means{0.0, 0.0};
    std::array<double, 2> stds{1.0, 1.0};
    double platt_a = -1.0;
    double platt_b = 0.0;
    CalibrationMode mode = CalibrationMode::Simplified;
    std::vector<std::string> warnings;

    /// f(x) = w . standardized(x) + b; positive on the misinformation side.
    double decision(double partisanship, double conspiracy_pct) const;
    /// 1 / (1 + exp(platt_a f + platt_b)).
    double probability(double decision_value) const;
};

struct Split {
    std::vector<FringeSample> train;
    std::vector<FringeSample> test;
    std::vector<std::size_t> train_indices;  // ascending positions in the input
    std::vector<std::size_t> test_indices;
};

/// Stratified by label: each class is shuffled with the seed and its first
/// round(fraction * size) members go to training. Throws ArgumentError for fewer
/// than five samples, a single label or a fraction outside (0, 1).
Split split_train_test(std::span<const FringeSample> samples, double fraction = 0.8, std::uint64_t seed = 0);

struct TrainOptions {
    double c = 1.0;
    double tol = 1e-6;
    CalibrationMode mode = CalibrationMode::Platt;
    std::size_t max_iterations = 1000000;
    std::size_t calibration_folds = 3;
};

/// Linear soft-margin SVM (dual coordinate pairs, maximal violating pair) on
/// z-standardized features, misinformation as the positive class, followed by
/// Platt calibration on out-of-fold decision values.
/// Throws ArgumentError when a label is missing, TrainingError when all points
/// coincide, ConvergenceError when the optimizer exceeds its iteration budget.
FringeModel train_fringe(std::span<const FringeSample> train, const TrainOptions& options = {});

/// Calibrated fringe score in (0, 1). Inputs outside their bounds are clamped and
/// `clamped`, if given, is set.
double fringe_score(const FringeModel& model, double partisanship, double conspiracy_pct, bool* clamped = nullptr);

struct Evaluation {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;  // 0 when nothing is predicted positive
    double false_positive_rate = 0.0;
    double false_negative_rate = 0.0;
    std::vector<double> scores;
};

/// Confusion-matrix metrics at score >= 0.5. Throws ArgumentError on an empty set.
Evaluation evaluate(const FringeModel& model, std::span<const FringeSample> test);

/// Platt fit (Newton with backtracking, smoothed targets). Returns {A, B}.
std::array<double, 2> fit_platt(std::span<const double> decisions, std::span<const int> labels);

/// "domain,partisanship,conspiracy_pct,label"; throws ParseError on bad rows.
std::vector<FringeSample> read_fringe_csv(std::istream& in);
void write_model_json(std::ostream& out, const FringeModel& model);
FringeModel read_model_json(std::istream& in);
/// "domain,score"
void write_scores_csv(std::ostream& out, const FringeModel& model, std::span<const FringeSample> samples);

}  // namespace webeco::scoring
