// Acceptance suite: one PASS/FAIL line per criterion.
//
//   webeco_acceptance [--ci] [--only N]...

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "oracles.hpp"
#include "webeco/causality/fdr.hpp"
#include "webeco/causality/granger.hpp"
#include "webeco/causality/var.hpp"
#include "webeco/centrality/centrality.hpp"
#include "webeco/error.hpp"
#include "webeco/graph/graph.hpp"
#include "webeco/stats/popularity.hpp"
#include "webeco/stats/timeseries.hpp"
#include "webeco/stats/unit_root.hpp"

namespace fs = std::filesystem;
using namespace webeco;
using testing::column;

namespace {

const fs::path kFixtures = WEBECO_FIXTURES;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;  // 0: no runtime bound checked
    std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string ratio(int hits, int total) { return std::to_string(hits) + "/" + std::to_string(total); }

bool ci_mode = false;
std::size_t bootstrap_reps() { return ci_mode ? 200 : 1000; }

// ---- 1 ---------------------------------------------------------------------

Outcome bh() {
    const std::vector<bool> want{true, true, true, true, false};
    const bool hand = causality::bh_correct(std::vector<double>{0.01, 0.02, 0.03, 0.04, 0.2}, 0.05) == want;
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> size(1, 40);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution small(0.5);
    int agree = 0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> p(static_cast<std::size_t>(size(rng)));
        for (auto& v : p) v = small(rng) ? u(rng) * 0.02 : u(rng);
        if (causality::bh_correct(p, 0.05) == testing::bh_bruteforce(p, 0.05)) ++agree;
    }
    return {hand && agree == 1000, std::string("hand case ") + (hand ? "ok" : "wrong") + ", random " +
                                       ratio(agree, 1000)};
}

// ---- 2 ---------------------------------------------------------------------

Outcome dcg_exact() {
    stats::DomainRanks ranks{{"a.com", 1}, {"b.com", 3}};
    const double one = stats::dcg(ranks, {"a.com"});
    const double pair = stats::dcg(ranks, {"a.com", "b.com"});
    const double floor = stats::dcg(ranks, {"missing.com"});
    const double floor_want = 1.0 / std::log2(1'000'001.0);
    const double err = std::max({std::abs(one - 1.0), std::abs(pair - 1.5), std::abs(floor - floor_want)});
    return {err <= 1e-12, "max error " + fmt(err)};
}

// ---- 3 ---------------------------------------------------------------------

Outcome pagerank_oracle() {
    double worst_l1 = 0.0, worst_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(3000 + seed);
        const std::size_t n = 1 + seed % 10;
        const double density = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
        const auto edges = testing::random_digraph(n, density, rng);
        const auto got = centrality::pagerank(centrality::Digraph::from_edges(n, edges));
        const auto want = testing::pagerank_dense(n, edges, 0.85);
        double l1 = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            l1 += std::abs(got[i] - want[i]);
            sum += got[i];
        }
        worst_l1 = std::max(worst_l1, l1);
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    return {worst_l1 < 1e-8 && worst_sum <= 1e-10, "max L1 " + fmt(worst_l1) + ", max |sum-1| " + fmt(worst_sum)};
}

// ---- 4 ---------------------------------------------------------------------

Outcome harmonic_oracle() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(4000 + seed);
        const std::size_t n = 1 + seed % 50;
        const double density = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
        const auto edges = testing::random_digraph(n, density, rng);
        const auto g = centrality::Digraph::from_edges(n, edges);
        for (bool inbound : {true, false}) {
            const auto got = centrality::harmonic(
                g, inbound ? centrality::Orientation::Inbound : centrality::Orientation::Outbound);
            const auto want = testing::harmonic_floyd(n, edges, inbound);
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
        }
    }
    // a -> b -> c
    const auto path = centrality::harmonic(centrality::Digraph::from_edges(3, {{0, 1}, {1, 2}}));
    const bool fixture = std::abs(path[2] - 1.5) < 1e-12;
    return {worst < 1e-12 && fixture, "max diff " + fmt(worst) + ", H(c) = " + fmt(path[2], 17)};
}

// ---- 5 ---------------------------------------------------------------------

Outcome hits_oracle() {
    // a -> c, b -> c
    const auto star = centrality::hits(centrality::Digraph::from_edges(3, {{0, 2}, {1, 2}}));
    const double h = 1.0 / std::sqrt(2.0);
    const bool fixture = std::abs(star.authority[2] - 1.0) < 1e-9 && std::abs(star.hub[0] - h) < 1e-9 &&
                         std::abs(star.hub[1] - h) < 1e-9;
    double worst = 0.0;
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 200 && compared < 100; ++seed) {
        std::mt19937_64 rng(5000 + seed);
        const std::size_t n = 2 + seed % 15;
        const auto edges = testing::random_digraph(n, 0.35, rng);
        if (edges.empty()) continue;
        const auto want = testing::hits_eigen(n, edges);
        if (want.gap < 0.05) continue;  // dominant eigenvector not well separated
        const auto got = centrality::hits(centrality::Digraph::from_edges(n, edges));
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max({worst, std::abs(got.authority[i] - want.authority[i]), std::abs(got.hub[i] - want.hub[i])});
        }
        ++compared;
    }
    return {fixture && worst < 1e-9 && compared >= 50,
            std::string("fixture ") + (fixture ? "ok" : "wrong") + ", " + std::to_string(compared) +
                " graphs, max diff " + fmt(worst)};
}

// ---- 6 ---------------------------------------------------------------------

Eigen::MatrixXd m3(std::initializer_list<double> v) {
    Eigen::MatrixXd m(3, 3);
    auto it = v.begin();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = *it++;
    return m;
}

Outcome var_recovery() {
    const std::vector<Eigen::MatrixXd> lags = {m3({0.4, 0.1, 0.0, 0.0, 0.3, 0.2, 0.1, 0.0, 0.5}),
                                               m3({-0.2, 0.0, 0.1, 0.1, -0.1, 0.0, 0.0, 0.1, -0.2})};
    int close = 0, bic = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(6000 + seed);
        const auto y = testing::simulate_var(lags, Eigen::Vector3d(0.5, -0.2, 0.1), 1.0, 5000, rng);
        const auto m = causality::fit_var(y, 2);
        double err = 0.0;
        for (std::size_t i = 0; i < 2; ++i) err = std::max(err, (m.lags[i] - lags[i]).cwiseAbs().maxCoeff());
        worst = std::max(worst, err);
        close += err < 0.05;
        bic += causality::select_lag_bic(y, 8) == 2;
    }
    return {close >= 19 && bic >= 18,
            "error < 0.05 in " + ratio(close, 20) + " (worst " + fmt(worst) + "), BIC p=2 in " + ratio(bic, 20)};
}

// ---- 7 ---------------------------------------------------------------------

std::size_t bic_lag(const std::vector<std::vector<double>>& cols, std::size_t p_max = 5) {
    std::vector<std::span<const double>> spans(cols.begin(), cols.end());
    return causality::select_lag_bic(causality::stack_series(spans), p_max);
}

Outcome pairwise() {
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.0,  //
        0.3, 0.5;   // x -> y
    int detected = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(7000 + seed);
        const auto d = testing::simulate_var({a}, Eigen::Vector2d::Zero(), 1.0, 500, rng);
        const auto x = column(d, 0), y = column(d, 1);
        const std::size_t p = bic_lag({x, y});
        detected += causality::pairwise_granger(x, y, p).p_value < 0.01 &&
                    causality::pairwise_granger(y, x, p).p_value >= 0.05;
    }
    Eigen::MatrixXd ar(2, 2);
    ar << 0.3, 0.0,  //
        0.0, 0.3;
    int rejected = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 rng(7100 + seed);
        const auto d = testing::simulate_var({ar}, Eigen::Vector2d::Zero(), 1.0, 300, rng);
        const auto x = column(d, 0), y = column(d, 1);
        rejected += causality::pairwise_granger(x, y, bic_lag({x, y})).p_value < 0.05;
    }
    const double rate = rejected / 200.0;
    return {detected >= 18 && rate >= 0.02 && rate <= 0.09,
            "coupled " + ratio(detected, 20) + ", null rejection rate " + fmt(rate)};
}

// ---- 8 ---------------------------------------------------------------------

// z drives x and y; `direct` adds y -> x.
Eigen::MatrixXd common_driver(double direct, std::size_t n, std::mt19937_64& rng) {
    const Eigen::MatrixXd a = m3({0.2, direct, 0.8, 0.0, 0.2, 0.8, 0.0, 0.0, 0.7});
    return testing::simulate_var({a}, Eigen::Vector3d::Zero(), 1.0, n, rng);
}

Outcome partial() {
    causality::PgcOptions opts;
    opts.bootstrap = bootstrap_reps();
    int confounder_ok = 0, spurious_count = 0, silent_count = 0, direct_ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(8000 + seed);
        const auto d = common_driver(0.0, 1000, rng);
        const auto x = column(d, 0), y = column(d, 1), z = column(d, 2);
        opts.lag = bic_lag({x, y, z});
        opts.seed = seed;
        const bool spurious = causality::pairwise_granger(y, x, opts.lag).p_value < 0.05;
        const bool silent = causality::partial_granger(x, y, z, opts).p_value >= 0.05;
        spurious_count += spurious;
        silent_count += silent;
        confounder_ok += spurious && silent;

        std::mt19937_64 rng2(8100 + seed);
        const auto e = common_driver(0.3, 1000, rng2);
        const auto x2 = column(e, 0), y2 = column(e, 1), z2 = column(e, 2);
        opts.lag = bic_lag({x2, y2, z2});
        const auto r = causality::partial_granger(x2, y2, z2, opts);
        direct_ok += r.p_value < 0.05 && r.direction_sign == causality::DirectionSign::Positive;
    }
    int rejected = 0;
    opts.lag = 1;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 rng(8200 + seed);
        const auto x = testing::white_noise(300, rng), y = testing::white_noise(300, rng),
                   z = testing::white_noise(300, rng);
        opts.seed = 10'000 + seed;
        rejected += causality::partial_granger(x, y, z, opts).p_value < 0.05;
    }
    const double rate = rejected / 200.0;
    return {confounder_ok >= 18 && direct_ok >= 18 && rate >= 0.02 && rate <= 0.10,
            "B=" + std::to_string(opts.bootstrap) + ", confounder " + ratio(confounder_ok, 20) + " (pairwise flags " +
                ratio(spurious_count, 20) + ", partial silent " + ratio(silent_count, 20) + "), direct link " +
                ratio(direct_ok, 20) + ", null rejection rate " + fmt(rate)};
}

// ---- 9 ---------------------------------------------------------------------

std::vector<double> cumsum(std::vector<double> v) {
    std::partial_sum(v.begin(), v.end(), v.begin());
    return v;
}

Outcome stationarize_orders() {
    int walk = 0, noise = 0, twice = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(9000 + seed);
        auto order = [](const std::vector<double>& v) -> int {
            try {
                return static_cast<int>(stats::stationarize(v, 2).differences);
            } catch (const StationarityError&) {
                return -1;
            }
        };
        walk += order(testing::random_walk(500, rng)) == 1;
        noise += order(testing::white_noise(500, rng)) == 0;
        twice += order(cumsum(cumsum(testing::white_noise(500, rng)))) == 2;
    }
    // Context for the white-noise rate: the share of noise series KPSS rejects at 5%.
    int kpss_rejections = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        std::mt19937_64 rng(90'000 + seed);
        kpss_rejections += !stats::kpss_test(testing::white_noise(500, rng)).stationary;
    }
    return {walk >= 19 && noise >= 19 && twice >= 16,
            "random walk d=1 " + ratio(walk, 20) + ", white noise d=0 " + ratio(noise, 20) +
                ", doubly integrated d=2 " + ratio(twice, 20) + "; KPSS rejects white noise in " +
                fmt(kpss_rejections / 20.0) + "% of 2000 series"};
}

// ---- 10 --------------------------------------------------------------------

Outcome analytics_oracle() {
    using graph::Category;
    using graph::Subcategory;
    const std::vector<graph::Group> groups = {Category::Conspiracy, Category::Misinformation, Category::Authentic,
                                              Category::NonNews,    Category::Unlabeled,      Subcategory::QAnon,
                                              Subcategory::COVID,  Subcategory::UFO};
    std::mt19937_64 rng(10'000);
    int mismatches = 0, checks = 0;
    auto expect = [&](bool ok) {
        ++checks;
        mismatches += !ok;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = testing::random_corpus(10, rng);
        const auto g = graph::build_graph(c.records, c.labels);
        for (const auto& a : groups) {
            for (const auto& b : groups) {
                for (bool exclude : {true, false}) {
                    const auto want = c.shared_outlink_pct(a, b, exclude);
                    try {
                        const double got = analytics::shared_outlink_pct(g, a, b, {exclude});
                        expect(want && got == *want);
                    } catch (const UndefinedMetricError&) {
                        expect(!want);
                    }
                }
                for (std::size_t k : {0u, 1u, 3u}) expect(analytics::top_linked(g, a, b, k) == c.top_linked(a, b, k));
            }
            for (auto gran : {analytics::Granularity::Year, analytics::Granularity::Month, analytics::Granularity::Day}) {
                for (bool pooled : {false, true}) {
                    expect(analytics::conspiracy_oriented_pct_series(g, a, gran, {pooled}) == c.trend(a, gran, pooled));
                }
            }
        }
        const auto nodes = c.nodes();
        const std::vector<std::string> all(nodes.begin(), nodes.end());
        for (std::size_t s = 1; s <= std::min<std::size_t>(3, all.size()); ++s) {
            const std::vector<std::string> seeds(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(s));
            for (const auto& d : all) {
                for (std::size_t floor : {0u, 1u, 2u}) {
                    expect(analytics::overlap_similarity(g, d, seeds, floor) == c.overlap_similarity(d, seeds, floor));
                }
            }
            for (std::size_t k : {0u, 1u, 3u, 20u}) {
                for (std::size_t floor : {0u, 2u}) {
                    expect(analytics::discover_candidates(g, seeds, k, floor) == c.discover(seeds, k, floor));
                }
            }
        }
        for (const auto& d : all) expect(analytics::conspiracy_oriented(g, d) == c.conspiracy_oriented(d));
    }
    return {mismatches == 0, std::to_string(checks) + " comparisons, " + std::to_string(mismatches) + " mismatches"};
}

// ---- 11 --------------------------------------------------------------------

Outcome mann_whitney() {
    const auto hand = analytics::mann_whitney_u({1, 2}, {3, 4});
    const bool hand_ok = hand.exact && std::abs(hand.p_value - 1.0 / 3.0) < 1e-12;
    std::mt19937_64 rng(11'000);
    std::uniform_int_distribution<int> val(0, 9);
    double exact_err = 0.0, approx_err = 0.0;
    int cases = 0;
    bool all_exact = true;
    for (std::size_t n1 = 1; n1 <= 11; ++n1) {
        for (std::size_t n2 = 1; n1 + n2 <= 12; ++n2) {
            for (int rep = 0; rep < 5; ++rep) {
                std::vector<double> a(n1), b(n2);
                for (auto& v : a) v = val(rng);
                for (auto& v : b) v = val(rng);
                const auto got = analytics::mann_whitney_u(a, b);
                const double enumerated = testing::mann_whitney_exact_p(a, b);
                all_exact = all_exact && got.exact;
                exact_err = std::max(exact_err, std::abs(got.p_value - enumerated));
                if (std::min(n1, n2) >= 4) approx_err = std::max(approx_err, std::abs(got.p_normal - enumerated));
                ++cases;
            }
        }
    }
    // The normal path has no agreed tolerance at these sizes; its distance is reported.
    return {hand_ok && all_exact && exact_err < 1e-12,
            "p([1,2],[3,4]) = " + fmt(hand.p_value, 12) + ", " + std::to_string(cases) +
                " samples: exact vs enumeration " + fmt(exact_err) + ", normal vs enumeration (min n >= 4) " +
                fmt(approx_err)};
}

// ---- 12 --------------------------------------------------------------------

Outcome fringe() {
    std::mt19937_64 rng(12'000);
    const auto samples = testing::fringe_clusters(50, rng);
    const auto split = scoring::split_train_test(samples, 0.8, 2024);
    const auto platt = scoring::train_fringe(split.train);
    const auto ev = scoring::evaluate(platt, split.test);

    scoring::TrainOptions simple;
    simple.mode = scoring::CalibrationMode::Simplified;
    const auto model = scoring::train_fringe(split.train, simple);
    // A point on the decision boundary: f = 0 at the mean partisanship.
    const double p0 = model.means[0];
    const double c0 = model.means[1] - model.b * model.stds[1] / model.w[1];
    bool clamped = false;
    const double boundary = scoring::fringe_score(model, p0, c0, &clamped);

    // Five points along the gradient of f in raw feature space.
    bool monotone = true;
    for (const auto* m : {&model, &platt}) {
        const double dp = m->w[0] / m->stds[0], dc = m->w[1] / m->stds[1];
        const double h = std::min(dp != 0.0 ? 0.2 / std::abs(dp) : INFINITY, dc != 0.0 ? 10.0 / std::abs(dc) : INFINITY);
        double last_f = -INFINITY, last_s = -INFINITY;
        for (int i = -2; i <= 2; ++i) {
            const double p = 0.0 + i * h * dp, c = 30.0 + i * h * dc;
            const double f = m->decision(p, c), s = scoring::fringe_score(*m, p, c);
            monotone = monotone && f > last_f && s > last_s;
            last_f = f;
            last_s = s;
        }
    }
    const bool ok = ev.accuracy == 1.0 && ev.false_positive_rate == 0.0 && !clamped &&
                    std::abs(boundary - 0.5) < 1e-9 && monotone;
    return {ok, "held-out accuracy " + fmt(ev.accuracy) + ", FPR " + fmt(ev.false_positive_rate) +
                    ", boundary score " + fmt(boundary, 12) + ", ray " + (monotone ? "monotone" : "not monotone")};
}

// ---- 13 --------------------------------------------------------------------

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string s = buf.str();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(s.data(), s.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    char byte[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

int sh(const std::string& args) {
    const std::string cmd = std::string("\"") + WEBECO_CLI + "\" " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

/// Inputs for a full pipeline run, written once.
void write_pipeline_inputs(const fs::path& in) {
    fs::create_directories(in);
    std::mt19937_64 rng(13'000);
    {
        std::ofstream ranks(in / "ranks.csv");
        ranks << "date,domain,rank\n";
        std::uniform_int_distribution<std::uint32_t> rank(1, 5000);
        for (int day = 0; day < 120; ++day) {
            const auto date = Date::parse("2020-01-01").plus_days(day).to_string();
            for (const char* d : {"conspiracyhub.com", "truthseeker.net", "nytimes.com", "bbc.co.uk"}) {
                if (rank(rng) % 7 != 0) ranks << date << ',' << d << ',' << rank(rng) << '\n';
            }
        }
    }
    {
        std::ofstream f(in / "fringe.csv");
        f << "domain,partisanship,conspiracy_pct,label\n";
        for (const auto& s : testing::fringe_clusters(30, rng)) {
            f << s.domain << ',' << s.partisanship << ',' << s.conspiracy_pct << ',' << scoring::to_string(s.label)
              << '\n';
        }
    }
    Eigen::MatrixXd a = m3({0.3, 0.5, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.3});
    const auto data = testing::simulate_var({a}, Eigen::Vector3d::Zero(), 1.0, 400, rng);
    for (int r = 0; r < 3; ++r) {
        std::ofstream s(in / ("s" + std::to_string(r) + ".csv"));
        stats::write_series_csv(s, stats::TimeSeries::daily(Date::parse("2019-01-01"), column(data, r)));
    }
    std::ofstream job(in / "job.json");
    job << R"({"name": "g", "seed": 7, "bootstrap": )" << bootstrap_reps() << R"(,
  "series": {"x": {"name": "popularity", "path": "s0.csv"},
             "y": {"name": "misinfo", "path": "s1.csv"},
             "z": {"name": "conspiracy", "path": "s2.csv"}}})";
}

/// Every subcommand except crawl; returns the number of failed invocations.
int run_pipeline(const fs::path& in, const fs::path& out, int jobs) {
    fs::remove_all(out);
    fs::create_directories(out);
    const std::string g = " --seed 5 --jobs " + std::to_string(jobs) + " ";
    auto m = [&](const char* name) { return " --manifest " + q(out / (std::string("manifest_") + name + ".json")); };
    const fs::path labels = kFixtures / "labels.csv";
    int failures = 0;
    failures += sh("extract --pages " + q(kFixtures / "pages.jsonl") + " --labels " + q(labels) + " --out " +
                   q(out / "links.csv") + " --report " + q(out / "ingest.json") + m("extract") + g) != 0;
    failures += sh("graph --links " + q(out / "links.csv") + " --labels " + q(labels) + " --out " + q(out / "g.bin") +
                   " --edges-csv " + q(out / "edges.csv") + " --edge-dates-csv " + q(out / "edge_dates.csv") +
                   " --nodes-csv " + q(out / "nodes.csv") + m("graph") + g) != 0;
    const auto graph = q(out / "g.bin");
    failures += sh("similarity --graph " + graph + " --out " + q(out / "similarity.csv") + m("similarity") + g) != 0;
    failures += sh("discover --graph " + graph + " --seed-domain conspiracyhub.com --min-connections 0 --out " +
                   q(out / "discover.csv") + m("discover") + g) != 0;
    failures += sh("oriented --graph " + graph + " --out " + q(out / "oriented.csv") + m("oriented") + g) != 0;
    failures += sh("trend --graph " + graph + " --sources conspiracy --granularity day --out " + q(out / "trend.csv") +
                   m("trend") + g) != 0;
    failures += sh("centrality --graph " + graph + " --out " + q(out / "centrality.csv") + m("centrality") + g) != 0;
    failures += sh("report --graph " + graph + " --out " + q(out / "report.json") + m("report") + g) != 0;
    failures += sh("popularity --ranks " + q(in / "ranks.csv") + " --labels " + q(labels) +
                   " --group conspiracy --out " + q(out / "dcg.csv") + m("popularity") + g) != 0;
    failures += sh("popularity --ranks " + q(in / "ranks.csv") + " --labels " + q(labels) +
                   " --group authentic --metric median --window 7 --out " + q(out / "median.csv") + m("median") + g) !=
                0;
    failures += sh("mentions --pages " + q(kFixtures / "pages.jsonl") +
                   " --keyword moon --from 2019-01-01 --to 2021-12-31 --out " + q(out / "mentions.csv") +
                   m("mentions") + g) != 0;
    failures += sh("causality --config " + q(in / "job.json") + " --out-json " + q(out / "causality.json") +
                   " --out-csv " + q(out / "causality.csv") + m("causality") + g) != 0;
    failures += sh("fringe --input " + q(in / "fringe.csv") + " --model-out " + q(out / "model.json") +
                   " --scores-out " + q(out / "scores.csv") + " --metrics-out " + q(out / "metrics.json") +
                   m("fringe") + g) != 0;
    return failures;
}

std::map<std::string, std::string> digests(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = sha256_file(e.path());
    return out;
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("webeco_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    write_pipeline_inputs(root / "in");
    const fs::path out = root / "out";
    int failures = run_pipeline(root / "in", out, 1);
    const auto first = digests(out);
    failures += run_pipeline(root / "in", out, 1);
    const auto second = digests(out);
    failures += run_pipeline(root / "in", out, 3);
    const auto threaded = digests(out);
    fs::remove_all(root);
    int differing = 0;
    for (const auto& [name, digest] : first) {
        differing += second.count(name) == 0 || second.at(name) != digest;
        differing += threaded.count(name) == 0 || threaded.at(name) != digest;
    }
    return {failures == 0 && differing == 0 && first.size() == second.size() && first.size() >= 25,
            std::to_string(first.size()) + " files, " + std::to_string(failures) + " failed runs, " +
                std::to_string(differing) + " digest mismatches (same seed; --jobs 1 and 3)"};
}

// ---- 14 --------------------------------------------------------------------

std::vector<std::string> sorted_rows(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    std::sort(rows.begin() + (rows.empty() ? 0 : 1), rows.end());
    return rows;
}

Outcome ingest_fixture() {
    std::ifstream pages(kFixtures / "pages.jsonl");
    const auto result = ingest::ingest_pages(ingest::read_pages_jsonl(pages), {});
    std::ostringstream got;
    ingest::write_links_csv(got, result.links);
    std::ifstream expected_file(kFixtures / "expected_links.csv");
    std::ostringstream expected;
    expected << expected_file.rdbuf();
    const bool multiset = sorted_rows(got.str()) == sorted_rows(expected.str());

    // Meta date 2021-05-01 against a URL path date of 2021-06-02.
    ingest::PageRecord page;
    page.url = "https://www.example-news.com/2021/06/02/story.html";
    page.fetch_time = Timestamp::parse_rfc3339("2022-01-01T00:00:00Z");
    page.body =
        "<html><head><meta property=\"article:published_time\" content=\"2021-05-01T08:00:00Z\"></head>"
        "<body><a href=\"https://other.org/x\">x</a></body></html>";
    ingest::IngestReport report;
    const auto links = ingest::page_links(page, report);
    const bool priority = links.size() == 1 && links[0].publication_date == Date::parse("2021-05-01");
    return {multiset && priority, std::to_string(result.links.size()) + " records, multiset " +
                                      (multiset ? "equal" : "different") + ", meta-over-path " +
                                      (priority ? "ok" : "wrong")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_flag("--ci", ci_mode, "Use 200 bootstrap replicates instead of 1000");
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "Benjamini-Hochberg hand case and brute-force agreement", 1, bh},
        {2, "DCG exact values", 1, dcg_exact},
        {3, "PageRank against a dense linear solve", 5, pagerank_oracle},
        {4, "harmonic centrality against Floyd-Warshall", 10, harmonic_oracle},
        {5, "HITS fixture and dominant eigenvectors", 5, hits_oracle},
        {6, "VAR(2) coefficient recovery and BIC order", 60, var_recovery},
        {7, "pairwise Granger power and null calibration", 120, pairwise},
        {8, "partial Granger under a common driver", 600, partial},
        {9, "differencing order from unit-root tests", 30, stationarize_orders},
        {10, "analytics against brute force on small corpora", 5, analytics_oracle},
        {11, "Mann-Whitney exact p-values", 5, mann_whitney},
        {12, "fringe classifier on separable clusters", 10, fringe},
        {13, "byte-identical pipeline reruns", 0, determinism},
        {14, "ingest fixtures", 1, ingest_fixture},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_seconds == 0 || secs < c.budget_seconds;
        if (!in_time) o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " (" << fmt(secs, 3) << " s): "
                  << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
