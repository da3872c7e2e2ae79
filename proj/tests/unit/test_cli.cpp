#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../support/oracles.hpp"
#include "webeco/stats/timeseries.hpp"

namespace fs = std::filesystem;
using namespace webeco;

namespace {

const fs::path kFixtures = WEBECO_FIXTURES;

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("webeco_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run webeco_cli(const std::string& args, const fs::path& dir) {
    const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + WEBECO_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::vector<std::string> sorted_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    std::sort(lines.begin() + (lines.empty() ? 0 : 1), lines.end());
    return lines;
}

bool no_partials(const fs::path& dir) {
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.path().extension() == ".partial") return false;
    }
    return true;
}

void write_series(const fs::path& p, const std::vector<double>& v) {
    std::ofstream out(p);
    stats::write_series_csv(out, stats::TimeSeries::daily(Date::parse("2019-01-01"), v));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("extract on the three-page corpus reproduces the hand-derived link records") {
    const auto dir = scratch("extract");
    const auto r = webeco_cli("extract --pages " + q(kFixtures / "pages.jsonl") + " --labels " +
                                  q(kFixtures / "labels.csv") + " --out " + q(dir / "links.csv") + " --report " +
                                  q(dir / "report.json"),
                              dir);
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("extract: 9 links from 3 pages", 0) == 0);
    CHECK(sorted_lines(slurp(dir / "links.csv")) == sorted_lines(slurp(kFixtures / "expected_links.csv")));
    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report["pages"] == 3);
    CHECK(report["dateless_pages"] == 1);
    CHECK(report["dropped_internal"] == 4);
    CHECK(report["dropped_scheme"] == 3);

    const auto manifest = nlohmann::json::parse(slurp(dir / "run_manifest.json"));
    CHECK(manifest["command"] == "extract");
    CHECK(manifest["inputs"].size() == 2);
    CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(manifest["outputs"][0]["path"] == "links.csv");
    const std::string hash_cmd = "sha256sum " + q(dir / "links.csv") + " > " + q(dir / "links.sha");
    REQUIRE(std::system(hash_cmd.c_str()) == 0);
    CHECK(manifest["outputs"][0]["sha256"] == slurp(dir / "links.sha").substr(0, 64));
    CHECK(no_partials(dir));
    fs::remove_all(dir);
}

TEST_CASE("help and usage errors") {
    const auto dir = scratch("usage");
    auto r = webeco_cli("report --help", dir);
    CHECK(r.status == 0);
    CHECK(r.out.find("--graph") != std::string::npos);

    r = webeco_cli("report --graph g.bin --out r.json --no-such-flag", dir);
    CHECK(r.status == 1);
    CHECK(r.err.find("--no-such-flag") != std::string::npos);
    CHECK(r.err.find("--graph") != std::string::npos);

    CHECK(webeco_cli("", dir).status == 1);
    CHECK(webeco_cli("frobnicate", dir).status == 1);
    CHECK(webeco_cli("report --out r.json", dir).status == 1);
    CHECK(webeco_cli("trend --graph g.bin --out t.csv --granularity week", dir).status == 1);
    CHECK(webeco_cli("mentions --pages p --keyword k --from 2020-13-01 --to 2020-12-31 --out m.csv", dir).status ==
          1);
    fs::remove_all(dir);
}

TEST_CASE("data errors exit 2 and leave no partial outputs") {
    const auto dir = scratch("data");
    {
        std::ofstream bad(dir / "bad_links.csv");
        bad << "source_domain,target_domain,source_url,target_url,pub_date\n"
            << "a.com,b.com,https://a.com/,https://b.com/,2020-02-30\n";
    }
    auto r = webeco_cli("graph --links " + q(dir / "bad_links.csv") + " --labels " + q(kFixtures / "labels.csv") +
                            " --out " + q(dir / "g.bin"),
                        dir);
    CHECK(r.status == 2);
    CHECK(!fs::exists(dir / "g.bin"));

    CHECK(webeco_cli("report --graph " + q(dir / "missing.bin") + " --out " + q(dir / "r.json"), dir).status == 2);

    // The first output is already open when the second cannot be created.
    { std::ofstream(dir / "blocker") << "x"; }
    r = webeco_cli("extract --pages " + q(kFixtures / "pages.jsonl") + " --out " + q(dir / "links.csv") +
                       " --report " + q(dir / "blocker" / "report.json"),
                   dir);
    CHECK(r.status == 2);
    CHECK(!fs::exists(dir / "links.csv"));
    CHECK(!fs::exists(dir / "run_manifest.json"));
    CHECK(no_partials(dir));
    fs::remove_all(dir);
}

TEST_CASE("causality job on a coupled system reports one positive arrow") {
    const auto dir = scratch("causality");
    std::mt19937_64 rng(9);
    Eigen::MatrixXd a(3, 3);
    a << 0.3, 0.5, 0.0,  //
        0.0, 0.3, 0.0,   //
        0.0, 0.0, 0.3;
    const auto data = testing::simulate_var({a}, Eigen::VectorXd::Zero(3), 1.0, 800, rng);
    write_series(dir / "popularity.csv", testing::column(data, 0));
    write_series(dir / "misinfo.csv", testing::column(data, 1));
    write_series(dir / "conspiracy.csv", testing::column(data, 2));
    {
        std::ofstream job(dir / "job.json");
        job << R"({"name": "covid", "bootstrap": 199, "seed": 3,
                  "series": {"x": {"name": "popularity", "path": "popularity.csv"},
                             "y": {"name": "misinfo", "path": "misinfo.csv"},
                             "z": {"name": "conspiracy", "path": "conspiracy.csv"}}})";
    }
    const auto r = webeco_cli("causality --config " + q(dir / "job.json") + " --out-json " + q(dir / "out.json") +
                                  " --out-csv " + q(dir / "out.csv"),
                              dir);
    REQUIRE(r.status == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "out.json"));
    REQUIRE(report["arrows"].size() == 1);
    CHECK(report["arrows"][0]["from"] == "misinfo");
    CHECK(report["arrows"][0]["to"] == "popularity");
    CHECK(report["arrows"][0]["sign"] == "positive");
    const auto manifest = nlohmann::json::parse(slurp(dir / "run_manifest.json"));
    CHECK(manifest["seed"] == 3);
    CHECK(manifest["inputs"].size() == 4);
    fs::remove_all(dir);
}

TEST_CASE("repeated runs are byte-identical and independent of --jobs") {
    const auto dir = scratch("determinism");
    auto pipeline = [&](const fs::path& out, int jobs) {
        fs::create_directories(out);
        const std::string j = " --jobs " + std::to_string(jobs);
        REQUIRE(webeco_cli("extract --pages " + q(kFixtures / "pages.jsonl") + " --out " + q(out / "links.csv") +
                               " --manifest " + q(out / "m_extract.json") + j,
                           dir)
                    .status == 0);
        REQUIRE(webeco_cli("graph --links " + q(out / "links.csv") + " --labels " + q(kFixtures / "labels.csv") +
                               " --out " + q(out / "g.bin") + " --edges-csv " + q(out / "edges.csv") +
                               " --manifest " + q(out / "m_graph.json"),
                           dir)
                    .status == 0);
        REQUIRE(webeco_cli("centrality --graph " + q(out / "g.bin") + " --out " + q(out / "c.csv") +
                               " --manifest " + q(out / "m_centrality.json") + j,
                           dir)
                    .status == 0);
        REQUIRE(webeco_cli("report --graph " + q(out / "g.bin") + " --out " + q(out / "r.json") + " --manifest " +
                               q(out / "m_report.json") + j,
                           dir)
                    .status == 0);
    };
    pipeline(dir / "a", 1);
    pipeline(dir / "b", 3);
    for (const char* f : {"links.csv", "g.bin", "edges.csv", "c.csv", "r.json", "m_extract.json"}) {
        INFO(f);
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    fs::remove_all(dir);
}

TEST_CASE("JSON config feeds flags and the command line wins") {
    const auto dir = scratch("config");
    std::mt19937_64 rng(5);
    {
        std::ofstream in(dir / "fringe.csv");
        in << "domain,partisanship,conspiracy_pct,label\n";
        for (const auto& s : testing::fringe_clusters(20, rng)) {
            in << s.domain << ',' << s.partisanship << ',' << s.conspiracy_pct << ','
               << scoring::to_string(s.label) << '\n';
        }
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"seed": 11, "fringe": {"fraction": 0.75, "simplified": true}})";
    }
    const std::string base = "--config " + q(dir / "cfg.json") + " fringe --input " + q(dir / "fringe.csv") +
                             " --metrics-out " + q(dir / "metrics.json") + " --model-out " + q(dir / "model.json");
    auto r = webeco_cli(base, dir);
    REQUIRE(r.status == 0);
    auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
    CHECK(metrics["test_size"] == 10);
    CHECK(metrics["mode"] == "simplified");
    CHECK(metrics["accuracy"] == 1.0);
    auto manifest = nlohmann::json::parse(slurp(dir / "run_manifest.json"));
    CHECK(manifest["seed"] == 11);

    r = webeco_cli(base + " --fraction 0.5 --seed 12", dir);
    REQUIRE(r.status == 0);
    metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
    CHECK(metrics["test_size"] == 20);
    manifest = nlohmann::json::parse(slurp(dir / "run_manifest.json"));
    CHECK(manifest["seed"] == 12);

    r = webeco_cli("fringe --input " + q(dir / "fringe.csv") + " --model " + q(dir / "model.json") +
                       " --scores-out " + q(dir / "scores.csv"),
                   dir);
    REQUIRE(r.status == 0);
    CHECK(slurp(dir / "scores.csv").rfind("domain,score\n", 0) == 0);
    fs::remove_all(dir);
}

}
