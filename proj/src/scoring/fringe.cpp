#include "webeco/scoring/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "webeco/csv.hpp"
#include "webeco/error.hpp"

namespace webeco::scoring {

namespace {

using Point = std::array<double, 2>;

struct LinearSvm {
    Point w{0.0, 0.0};
    double b = 0.0;
    std::size_t iterations = 0;
};

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }

// Dual SMO with the maximal violating pair; stops when the KKT gap drops below tol.
LinearSvm fit_svm(const std::vector<Point>& x, const std::vector<int>& y, double c, double tol,
                  std::size_t max_iterations) {
    const std::size_t n = x.size();
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // G = Q alpha - 1
    LinearSvm svm;

    auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0.0); };
    auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0.0) || (y[t] < 0 && alpha[t] < c); };

    for (;;) {
        double g_max = -std::numeric_limits<double>::infinity();
        double g_min = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (in_up(t) && v > g_max) {
                g_max = v;
                i = t;
            }
            if (in_low(t) && v < g_min) {
                g_min = v;
                j = t;
            }
        }
        if (i == n || j == n || g_max - g_min < tol) break;
        if (++svm.iterations > max_iterations) throw ConvergenceError("SVM did not reach the tolerance", max_iterations);

        const double kii = dot(x[i], x[i]), kjj = dot(x[j], x[j]), kij = dot(x[i], x[j]);
        const double qij = y[i] * y[j] * kij;
        const double old_i = alpha[i], old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = kii + kjj + 2.0 * qij;
            if (quad <= 0.0) quad = 1e-12;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = kii + kjj - 2.0 * qij;
            if (quad <= 0.0) quad = 1e-12;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double di = (alpha[i] - old_i) * y[i], dj = (alpha[j] - old_j) * y[j];
        for (int k = 0; k < 2; ++k) svm.w[k] += di * x[i][k] + dj * x[j][k];
        for (std::size_t t = 0; t < n; ++t) grad[t] = y[t] * dot(svm.w, x[t]) - 1.0;
    }

    double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            free_sum += yg;
            ++n_free;
        }
    }
    const double rho = n_free > 0 ? free_sum / static_cast<double>(n_free) : (ub + lb) / 2.0;
    svm.b = -rho;
    return svm;
}

double mean_of(const std::vector<Point>& x, int k) {
    double s = 0.0;
    for (const auto& p : x) s += p[k];
    return s / static_cast<double>(x.size());
}

Point raw_point(const FringeSample& s) { return {s.partisanship, s.conspiracy_pct}; }

int sign_label(FringeLabel l) { return l == FringeLabel::Misinformation ? 1 : -1; }

}  // namespace

std::string to_string(FringeLabel l) { return l == FringeLabel::Misinformation ? "misinformation" : "authentic"; }

FringeLabel parse_fringe_label(const std::string& text) {
    if (text == "misinformation") return FringeLabel::Misinformation;
    if (text == "authentic") return FringeLabel::Authentic;
    throw ParseError("unknown label '" + text + "' (expected misinformation or authentic)");
}

std::string to_string(CalibrationMode m) { return m == CalibrationMode::Platt ? "platt" : "simplified"; }

CalibrationMode parse_calibration_mode(const std::string& text) {
    if (text == "platt") return CalibrationMode::Platt;
    if (text == "simplified") return CalibrationMode::Simplified;
    throw ParseError("unknown calibration mode '" + text + "' (expected platt or simplified)");
}

double FringeModel::decision(double partisanship, double conspiracy_pct) const {
    return w[0] * (partisanship - means[0]) / stds[0] + w[1] * (conspiracy_pct - means[1]) / stds[1] + b;
}

double FringeModel::probability(double f) const {
    const double t = platt_a * f + platt_b;
    // Evaluated on the side that cannot overflow.
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

Split split_train_test(std::span<const FringeSample> samples, double fraction, std::uint64_t seed) {
    if (samples.size() < 5) throw ArgumentError("split needs at least five samples");
    if (!(fraction > 0.0 && fraction < 1.0)) throw ArgumentError("train fraction must lie in (0, 1)");
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        by_class[samples[i].label == FringeLabel::Misinformation ? 0 : 1].push_back(i);
    }
    if (by_class[0].empty() || by_class[1].empty()) throw ArgumentError("cannot stratify: only one label present");

    std::mt19937_64 rng(seed);
    Split split;
    for (auto& members : by_class) {
        for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng() % i]);
        const auto n_train =
            static_cast<std::size_t>(std::llround(fraction * static_cast<double>(members.size())));
        split.train_indices.insert(split.train_indices.end(), members.begin(),
                                   members.begin() + static_cast<std::ptrdiff_t>(n_train));
        split.test_indices.insert(split.test_indices.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                                  members.end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    for (std::size_t i : split.train_indices) split.train.push_back(samples[i]);
    for (std::size_t i : split.test_indices) split.test.push_back(samples[i]);
    return split;
}

std::array<double, 2> fit_platt(std::span<const double> f, std::span<const int> labels) {
    if (f.size() != labels.size() || f.empty()) throw ArgumentError("platt: mismatched or empty inputs");
    double prior1 = 0.0, prior0 = 0.0;
    for (int l : labels) (l > 0 ? prior1 : prior0) += 1.0;
    const double hi = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo = 1.0 / (prior0 + 2.0);
    std::vector<double> t(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) t[i] = labels[i] > 0 ? hi : lo;

    auto objective = [&](double a, double b) {
        double v = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double z = f[i] * a + b;
            v += z >= 0.0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
        }
        return v;
    };

    double a = 0.0, b = std::log((prior0 + 1.0) / (prior1 + 1.0));
    double fval = objective(a, b);
    constexpr double kMinStep = 1e-10, kSigma = 1e-12, kEps = 1e-5;
    for (int iter = 0; iter < 100; ++iter) {
        double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double z = f[i] * a + b;
            double p, q;
            if (z >= 0.0) {
                p = std::exp(-z) / (1.0 + std::exp(-z));
                q = 1.0 / (1.0 + std::exp(-z));
            } else {
                p = 1.0 / (1.0 + std::exp(z));
                q = std::exp(z) / (1.0 + std::exp(z));
            }
            const double d2 = p * q;
            h11 += f[i] * f[i] * d2;
            h22 += d2;
            h21 += f[i] * d2;
            const double d1 = t[i] - p;
            g1 += f[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;
        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;
        double step = 1.0;
        while (step >= kMinStep) {
            const double na = a + step * da, nb = b + step * db;
            const double nf = objective(na, nb);
            if (nf < fval + 1e-4 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < kMinStep) break;
    }
    return {a, b};
}

FringeModel train_fringe(std::span<const FringeSample> train, const TrainOptions& options) {
    if (train.empty()) throw ArgumentError("no training samples");
    if (!(options.c > 0.0)) throw ArgumentError("C must be positive");
    std::vector<Point> raw;
    std::vector<int> y;
    for (const auto& s : train) {
        raw.push_back(raw_point(s));
        y.push_back(sign_label(s.label));
    }
    if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; })) {
        throw ArgumentError("training needs both labels");
    }

    FringeModel model;
    bool varies = false;
    for (int k = 0; k < 2; ++k) {
        model.means[k] = mean_of(raw, k);
        double ss = 0.0;
        for (const auto& p : raw) ss += (p[k] - model.means[k]) * (p[k] - model.means[k]);
        const double sd = std::sqrt(ss / static_cast<double>(raw.size()));
        if (sd > 0.0) {
            varies = true;
            model.stds[k] = sd;
        } else {
            model.stds[k] = 1.0;
        }
    }
    if (!varies) throw TrainingError("all training points coincide; no boundary can be fit");

    std::vector<Point> x(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        for (int k = 0; k < 2; ++k) x[i][k] = (raw[i][k] - model.means[k]) / model.stds[k];
    }
    const auto svm = fit_svm(x, y, options.c, options.tol, options.max_iterations);
    model.w = svm.w;
    model.b = svm.b;

    model.mode = options.mode;
    if (options.mode == CalibrationMode::Simplified) return model;

    // Out-of-fold decision values: members of each class dealt round-robin into folds.
    const std::size_t folds = std::max<std::size_t>(2, options.calibration_folds);
    std::vector<std::size_t> fold(x.size());
    std::size_t seen_pos = 0, seen_neg = 0;
    for (std::size_t i = 0; i < x.size(); ++i) fold[i] = (y[i] > 0 ? seen_pos++ : seen_neg++) % folds;

    std::vector<double> oof(x.size(), 0.0);
    bool usable = true;
    for (std::size_t f = 0; f < folds && usable; ++f) {
        std::vector<Point> fx;
        std::vector<int> fy;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (fold[i] != f) {
                fx.push_back(x[i]);
                fy.push_back(y[i]);
            }
        }
        const bool both = std::any_of(fy.begin(), fy.end(), [](int v) { return v > 0; }) &&
                          std::any_of(fy.begin(), fy.end(), [](int v) { return v < 0; });
        if (!both) {
            usable = false;
            break;
        }
        const auto part = fit_svm(fx, fy, options.c, options.tol, options.max_iterations);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (fold[i] == f) oof[i] = dot(part.w, x[i]) + part.b;
        }
    }
    if (!usable) {
        model.mode = CalibrationMode::Simplified;
        model.warnings.push_back("too few samples per class for calibration folds; using simplified scores");
        return model;
    }
    const auto [a, b] = fit_platt(oof, y);
    if (!(a < 0.0) || !std::isfinite(b)) {
        model.mode = CalibrationMode::Simplified;
        model.warnings.push_back("calibration slope was not negative; using simplified scores");
        return model;
    }
    model.platt_a = a;
    model.platt_b = b;
    return model;
}

double fringe_score(const FringeModel& model, double partisanship, double conspiracy_pct, bool* clamped) {
    const double p = std::clamp(partisanship, -1.0, 1.0);
    const double c = std::clamp(conspiracy_pct, 0.0, 100.0);
    if (clamped) *clamped = p != partisanship || c != conspiracy_pct;
    return model.probability(model.decision(p, c));
}

Evaluation evaluate(const FringeModel& model, std::span<const FringeSample> test) {
    if (test.empty()) throw ArgumentError("empty evaluation set");
    Evaluation ev;
    for (const auto& s : test) {
        const double score = fringe_score(model, s.partisanship, s.conspiracy_pct);
        ev.scores.push_back(score);
        const bool predicted = score >= 0.5;
        const bool actual = s.label == FringeLabel::Misinformation;
        if (predicted && actual) ++ev.tp;
        else if (predicted) ++ev.fp;
        else if (actual) ++ev.fn;
        else ++ev.tn;
    }
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    ev.accuracy = ratio(ev.tp + ev.tn, test.size());
    ev.precision = ratio(ev.tp, ev.tp + ev.fp);
    ev.false_positive_rate = ratio(ev.fp, ev.fp + ev.tn);
    ev.false_negative_rate = ratio(ev.fn, ev.fn + ev.tp);
    return ev;
}

std::vector<FringeSample> read_fringe_csv(std::istream& in) {
    std::vector<FringeSample> out;
    csv::read(in, {"domain", "partisanship", "conspiracy_pct", "label"},
              [&](const std::vector<std::string>& f, std::size_t line) {
                  const std::string where = "fringe input line " + std::to_string(line);
                  FringeSample s;
                  s.domain = f[0];
                  try {
                      std::size_t used = 0;
                      s.partisanship = std::stod(f[1], &used);
                      if (used != f[1].size()) throw std::invalid_argument(f[1]);
                      s.conspiracy_pct = std::stod(f[2], &used);
                      if (used != f[2].size()) throw std::invalid_argument(f[2]);
                  } catch (const std::logic_error&) {
                      throw ParseError(where + ": not a number");
                  }
                  if (!(s.partisanship >= -1.0 && s.partisanship <= 1.0)) {
                      throw ParseError(where + ": partisanship outside [-1, 1]");
                  }
                  if (!(s.conspiracy_pct >= 0.0 && s.conspiracy_pct <= 100.0)) {
                      throw ParseError(where + ": conspiracy_pct outside [0, 100]");
                  }
                  try {
                      s.label = parse_fringe_label(f[3]);
                  } catch (const ParseError& e) {
                      throw ParseError(where + ": " + e.what());
                  }
                  out.push_back(std::move(s));
              });
    return out;
}

void write_model_json(std::ostream& out, const FringeModel& model) {
    nlohmann::ordered_json doc;
    doc["w"] = model.w;
    doc["b"] = model.b;
    doc["means"] = model.means;
    doc["stds"] = model.stds;
    doc["platt_a"] = model.platt_a;
    doc["platt_b"] = model.platt_b;
    doc["mode"] = to_string(model.mode);
    out << doc.dump(2) << '\n';
}

FringeModel read_model_json(std::istream& in) {
    FringeModel m;
    try {
        const auto doc = nlohmann::json::parse(in);
        m.w = doc.at("w").get<std::array<double, 2>>();
        m.b = doc.at("b").get<double>();
        m.means = doc.at("means").get<std::array<double, 2>>();
        m.stds = doc.at("stds").get<std::array<double, 2>>();
        m.platt_a = doc.value("platt_a", -1.0);
        m.platt_b = doc.value("platt_b", 0.0);
        m.mode = parse_calibration_mode(doc.value("mode", std::string("simplified")));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model: ") + e.what());
    }
    if (!(m.stds[0] > 0.0) || !(m.stds[1] > 0.0)) throw ParseError("model: standard deviations must be positive");
    return m;
}

void write_scores_csv(std::ostream& out, const FringeModel& model, std::span<const FringeSample> samples) {
    csv::write_record(out, {"domain", "score"});
    for (const auto& s : samples) {
        csv::write_record(out, {s.domain, csv::format_double(fringe_score(model, s.partisanship, s.conspiracy_pct))});
    }
}

}  // namespace webeco::scoring
