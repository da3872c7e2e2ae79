#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "webeco/analytics/analytics.hpp"
#include "webeco/error.hpp"

using namespace webeco;
using namespace webeco::analytics;
using graph::CategoryLabel;
using graph::Subcategory;
using ingest::LinkRecord;

namespace {

LinkRecord rec(const std::string& s, const std::string& t, const std::string& date = "2020-01-15") {
    return {"https://" + s + "/p", s, "https://" + t + "/q", t, Date::parse(date)};
}

// c1, c2 conspiracy; a1 authentic; n1 non-news; m1 misinformation.
testing::RawCorpus small_corpus() {
    testing::RawCorpus c;
    c.labels = {{"c1.com", CategoryLabel(Category::Conspiracy, Subcategory::QAnon)},
                {"c2.com", CategoryLabel(Category::Conspiracy, Subcategory::UFO)},
                {"a1.com", CategoryLabel(Category::Authentic)},
                {"n1.com", CategoryLabel(Category::NonNews)},
                {"m1.com", CategoryLabel(Category::Misinformation)}};
    c.records = {rec("c1.com", "x.com"), rec("c1.com", "y.com"), rec("c2.com", "x.com", "2020-02-03"),
                 rec("c1.com", "c2.com"), rec("a1.com", "y.com"), rec("a1.com", "z.com"),
                 rec("m1.com", "z.com"),  rec("m1.com", "x.com"), rec("n1.com", "z.com"),
                 rec("c2.com", "z.com", "2021-05-05")};
    return c;
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("shared out-link percentage on a hand fixture") {
    const auto c = small_corpus();
    const auto g = graph::build_graph(c.records, c.labels);
    // conspiracy out {x, y, c2, z} minus members {c1, c2} -> {x, y, z}; authentic out {y, z}.
    CHECK(shared_outlink_pct(g, Category::Conspiracy, Category::Authentic) == doctest::Approx(200.0 / 3.0));
    CHECK(shared_outlink_pct(g, Category::Authentic, Category::Conspiracy) == doctest::Approx(100.0));
    CHECK_THROWS_AS(shared_outlink_pct(g, Category::Unlabeled, Category::Authentic), UndefinedMetricError);
}

TEST_CASE("conspiracy orientation excludes misinformation sources") {
    const auto c = small_corpus();
    const auto g = graph::build_graph(c.records, c.labels);
    // x: c1, c2, m1 -> 2 conspiracy vs 0 authentic/non-news.
    CHECK(conspiracy_oriented(g, "x.com"));
    // y: c1 vs a1 -> tie, not oriented.
    CHECK_FALSE(conspiracy_oriented(g, "y.com"));
    CHECK(conspiracy_oriented_domains(g) == std::set<std::string>{"c2.com", "x.com"});
}

TEST_CASE("trend and top-linked on the hand fixture") {
    const auto c = small_corpus();
    const auto g = graph::build_graph(c.records, c.labels);
    const auto trend = conspiracy_oriented_pct_series(g, Category::Conspiracy, Granularity::Month);
    REQUIRE(trend.size() == 3);
    CHECK(trend[0].period == "2020-01");
    // c1 in January: x (oriented), y, c2 (oriented) -> 2/3.
    CHECK(trend[0].value == doctest::Approx(200.0 / 3.0));
    CHECK(trend[1].value == doctest::Approx(100.0));
    CHECK(trend[2].value == doctest::Approx(0.0));

    const auto top = top_linked(g, Category::Conspiracy, Category::Conspiracy, 0);
    REQUIRE(top.size() == 1);
    CHECK(top[0] == LinkedDomain{"c2.com", 1});
}

TEST_CASE("overlap similarity honours the connection floor") {
    const auto c = small_corpus();
    const auto g = graph::build_graph(c.records, c.labels);
    CHECK(overlap_similarity(g, "a1.com", std::vector<std::string>{"c1.com"}, 1) == doctest::Approx(0.5));
    CHECK_FALSE(overlap_similarity(g, "a1.com", std::vector<std::string>{"c1.com"}, 3));
    CHECK_FALSE(overlap_similarity(g, "x.com", std::vector<std::string>{"c1.com"}, 0));
    CHECK(discover_candidates(g, {"c1.com"}, 0, 1).empty());
    CHECK_THROWS_AS(discover_candidates(g, {"nobody.com"}, 3, 1), ArgumentError);
    const auto top = discover_candidates(g, {"c1.com"}, 2, 1);
    REQUIRE(top.size() == 2);
    CHECK(top[0].domain == "a1.com");  // a1, c2 and m1 tie at 0.5; name order decides
    CHECK(top[0].similarity == doctest::Approx(0.5));
}

TEST_CASE("analytics equal brute force on random small corpora") {
    std::mt19937_64 rng(20240601);
    const std::vector<graph::Group> groups = {Category::Conspiracy, Category::Misinformation, Category::Authentic,
                                              Category::NonNews, Subcategory::QAnon, Subcategory::UFO};
    for (int trial = 0; trial < 300; ++trial) {
        const auto c = testing::random_corpus(10, rng);
        const auto g = graph::build_graph(c.records, c.labels);
        for (const auto& a : groups) {
            for (const auto& b : groups) {
                for (bool exclude : {true, false}) {
                    const auto want = c.shared_outlink_pct(a, b, exclude);
                    if (want) {
                        CHECK(shared_outlink_pct(g, a, b, {exclude}) == *want);
                    } else {
                        CHECK_THROWS_AS(shared_outlink_pct(g, a, b, {exclude}), UndefinedMetricError);
                    }
                }
            }
            for (auto gran : {Granularity::Year, Granularity::Month, Granularity::Day}) {
                for (bool pooled : {false, true}) {
                    CHECK(conspiracy_oriented_pct_series(g, a, gran, {pooled}) == c.trend(a, gran, pooled));
                }
            }
            for (const auto& b : groups) {
                for (std::size_t k : {0u, 1u, 3u}) CHECK(top_linked(g, a, b, k) == c.top_linked(a, b, k));
            }
        }
        const auto nodes = c.nodes();
        std::vector<std::string> seeds(nodes.begin(), std::next(nodes.begin(), std::min<std::ptrdiff_t>(2, nodes.size())));
        for (const auto& d : nodes) {
            CHECK(conspiracy_oriented(g, d) == c.conspiracy_oriented(d));
            for (std::size_t floor : {0u, 1u, 2u}) CHECK(overlap_similarity(g, d, seeds, floor) == c.overlap_similarity(d, seeds, floor));
        }
        for (std::size_t k : {1u, 3u, 20u}) {
            for (std::size_t floor : {0u, 2u}) CHECK(discover_candidates(g, seeds, k, floor) == c.discover(seeds, k, floor));
        }
    }
}

TEST_CASE("Mann-Whitney exact and approximate paths") {
    const auto r = mann_whitney_u({1, 2}, {3, 4});
    CHECK(r.u == 0.0);
    CHECK(r.exact);
    CHECK(r.p_value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> size(1, 6), val(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(size(rng)), b(size(rng));
        for (auto& v : a) v = val(rng);
        for (auto& v : b) v = val(rng);
        const auto got = mann_whitney_u(a, b);
        CHECK(got.u == testing::mann_whitney_u_pairwise(a, b));
        CHECK(got.p_value == doctest::Approx(testing::mann_whitney_exact_p(a, b)).epsilon(1e-12));
    }

    std::vector<double> big_a, big_b;
    for (int i = 0; i < 40; ++i) {
        big_a.push_back(i);
        big_b.push_back(i + 15.5);
    }
    const auto big = mann_whitney_u(big_a, big_b);
    CHECK_FALSE(big.exact);
    CHECK(big.p_value == big.p_normal);
    CHECK(big.p_value < 0.01);
    CHECK_THROWS_AS(mann_whitney_u({}, {1.0}), ArgumentError);
}

TEST_CASE("Bonferroni") {
    CHECK(bonferroni({0.01, 0.02, 0.5}, 0.05) == std::vector<bool>{true, false, false});
    CHECK(bonferroni({}, 0.05).empty());
}

}
