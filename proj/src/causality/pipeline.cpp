#include "webeco/causality/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "webeco/causality/fdr.hpp"
#include "webeco/causality/var.hpp"
#include "webeco/csv.hpp"
#include "webeco/error.hpp"
#include "webeco/stats/descriptive.hpp"
#include "webeco/stats/unit_root.hpp"

namespace webeco::causality {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kRoleNames[3] = {"x", "y", "z"};

std::uint64_t derive_seed(std::uint64_t seed, std::size_t group, std::size_t test) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(group), static_cast<std::uint32_t>(test)};
    std::mt19937_64 rng(seq);
    return rng();
}

Role parse_role(const std::string& s) {
    if (s == "x") return RoleX;
    if (s == "y") return RoleY;
    if (s == "z") return RoleZ;
    throw ParseError("unknown role '" + s + "' (expected x, y or z)");
}

std::vector<double> values_on(const stats::TimeSeries& ts, const std::vector<Date>& dates) {
    std::vector<double> out;
    out.reserve(dates.size());
    std::size_t j = 0;
    for (const Date d : dates) {
        while (ts.dates()[j] < d) ++j;
        out.push_back(ts.values()[j]);
    }
    return out;
}

struct PreparedGroup {
    GroupSummary summary;
    std::array<std::vector<double>, 3> values;
};

PreparedGroup prepare(const SeriesGroup& group, const PipelineConfig& config) {
    PreparedGroup out;
    out.summary.name = group.name;
    const auto dates = common_dates(group, config.from, config.to);
    if (dates.size() < config.min_overlap) {
        throw AlignmentError("group '" + group.name + "': " + std::to_string(dates.size()) +
                             " common dates, need at least " + std::to_string(config.min_overlap));
    }
    out.summary.first = dates.front();
    out.summary.last = dates.back();
    out.summary.aligned = dates.size();

    std::array<std::vector<double>, 3> raw;
    for (std::size_t r = 0; r < 3; ++r) {
        const auto& named = group.series[r];
        raw[r] = values_on(named.series, dates);
        try {
            stats::AdfOptions adf;
            adf.trend = config.adf_trend;
            out.summary.individual_d[r] = stats::stationarize(raw[r], config.max_diff, adf).differences;
        } catch (const StationarityError& e) {
            throw StationarityError(named.name, e.what());
        }
    }
    out.summary.d = *std::max_element(out.summary.individual_d.begin(), out.summary.individual_d.end());
    for (std::size_t r = 0; r < 3; ++r) {
        out.values[r] = out.summary.d == 0 ? raw[r] : stats::difference(raw[r], out.summary.d);
    }

    const std::size_t n = out.values[0].size();
    std::size_t p_max = config.p_max;
    if (n <= 3 * p_max + 1) p_max = n > 4 ? (n - 2) / 3 : 0;
    if (p_max == 0) throw AlignmentError("group '" + group.name + "': too few points for a VAR");
    const auto data = stack_series({out.values[0], out.values[1], out.values[2]});
    out.summary.lag = select_lag_bic(data, p_max);
    return out;
}

json date_or_null(const std::optional<Date>& d) { return d ? json(d->to_string()) : json(nullptr); }

}  // namespace

std::vector<DirectionResult> PipelineReport::arrows() const {
    std::vector<DirectionResult> out;
    std::copy_if(tests.begin(), tests.end(), std::back_inserter(out), [](const auto& t) { return t.rejected; });
    return out;
}

std::vector<Date> common_dates(const SeriesGroup& group, std::optional<Date> from, std::optional<Date> to) {
    std::vector<Date> dates = group.series[0].series.dates();
    for (std::size_t r = 1; r < 3; ++r) {
        std::vector<Date> next;
        const auto& other = group.series[r].series.dates();
        std::set_intersection(dates.begin(), dates.end(), other.begin(), other.end(), std::back_inserter(next));
        dates = std::move(next);
    }
    std::erase_if(dates, [&](Date d) { return (from && d < *from) || (to && d > *to); });
    return dates;
}

PipelineReport causality_pipeline(const std::vector<SeriesGroup>& groups, const PipelineConfig& config) {
    if (groups.empty()) throw ArgumentError("no series groups given");
    if (config.pairs.empty()) throw ArgumentError("no role pairs to test");
    for (const auto& pair : config.pairs) {
        if (pair.a == pair.b) throw ArgumentError("a role pair must name two different roles");
    }

    PipelineReport report;
    report.config = config;
    std::vector<std::size_t> test_group;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto prepared = prepare(groups[g], config);
        report.groups.push_back(prepared.summary);
        std::size_t test_index = 0;
        for (const auto& pair : config.pairs) {
            const auto third = static_cast<Role>(3 - pair.a - pair.b);
            for (const auto& [cause, effect] : {std::pair{pair.a, pair.b}, std::pair{pair.b, pair.a}}) {
                PgcOptions opts;
                opts.lag = prepared.summary.lag;
                opts.bootstrap = config.bootstrap;
                opts.seed = derive_seed(config.seed, g, test_index++);
                opts.jobs = config.jobs;
                DirectionResult t;
                t.group = groups[g].name;
                t.cause = groups[g].series[cause].name;
                t.effect = groups[g].series[effect].name;
                t.conditioned_on = groups[g].series[third].name;
                t.d = prepared.summary.d;
                t.pgc = partial_granger(prepared.values[effect], prepared.values[cause], prepared.values[third], opts);
                report.tests.push_back(std::move(t));
                test_group.push_back(g);
            }
        }
    }

    std::vector<std::vector<std::size_t>> families;
    if (config.family == FdrFamily::Joint) {
        families.emplace_back(report.tests.size());
        for (std::size_t i = 0; i < report.tests.size(); ++i) families[0][i] = i;
    } else {
        families.resize(groups.size());
        for (std::size_t i = 0; i < report.tests.size(); ++i) families[test_group[i]].push_back(i);
    }
    for (const auto& family : families) {
        std::vector<double> p;
        for (std::size_t i : family) p.push_back(report.tests[i].pgc.p_value);
        const auto reject = bh_correct(p, config.q);
        for (std::size_t j = 0; j < family.size(); ++j) report.tests[family[j]].rejected = reject[j];
    }
    return report;
}

FdrFamily parse_fdr_family(const std::string& text) {
    if (text == "joint") return FdrFamily::Joint;
    if (text == "per_group") return FdrFamily::PerGroup;
    throw ParseError("unknown FDR family '" + text + "' (expected joint or per_group)");
}

std::string to_string(FdrFamily f) { return f == FdrFamily::Joint ? "joint" : "per_group"; }

PipelineJob load_pipeline_job(std::istream& in, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config: top level must be an object");

    PipelineJob job;
    auto& c = job.config;
    try {
        if (doc.contains("from") && !doc["from"].is_null()) c.from = Date::parse(doc["from"].get<std::string>());
        if (doc.contains("to") && !doc["to"].is_null()) c.to = Date::parse(doc["to"].get<std::string>());
        c.q = doc.value("q", c.q);
        c.bootstrap = doc.value("bootstrap", c.bootstrap);
        c.seed = doc.value("seed", c.seed);
        c.p_max = doc.value("p_max", c.p_max);
        c.max_diff = doc.value("max_diff", c.max_diff);
        c.min_overlap = doc.value("min_overlap", c.min_overlap);
        c.adf_trend = doc.value("adf_trend", c.adf_trend);
        c.jobs = doc.value("jobs", c.jobs);
        if (doc.contains("family")) c.family = parse_fdr_family(doc["family"].get<std::string>());
        if (doc.contains("pairs")) {
            c.pairs.clear();
            for (const auto& p : doc["pairs"]) {
                if (!p.is_array() || p.size() != 2) throw ParseError("config: each pair must list two roles");
                c.pairs.push_back({parse_role(p[0].get<std::string>()), parse_role(p[1].get<std::string>())});
            }
        }

        auto load_group = [&](const std::string& name, const json& series) {
            SeriesGroup g;
            g.name = name;
            for (std::size_t r = 0; r < 3; ++r) {
                const char* role = kRoleNames[r];
                if (!series.contains(role)) throw ParseError("config: group '" + name + "' lacks role " + role);
                const auto& entry = series[role];
                const auto path = base_dir / entry.at("path").get<std::string>();
                g.series[r].name = entry.value("name", std::string(role));
                std::ifstream file(path);
                if (!file) throw ParseError("cannot open series file " + path.string());
                g.series[r].series = stats::read_series_csv(file);
            }
            job.groups.push_back(std::move(g));
        };
        if (doc.contains("groups")) {
            for (const auto& g : doc["groups"]) load_group(g.value("name", std::string("group")), g.at("series"));
        } else if (doc.contains("series")) {
            load_group(doc.value("name", std::string("group")), doc["series"]);
        } else {
            throw ParseError("config: needs 'series' or 'groups'");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!(c.q >= 0.0 && c.q <= 1.0)) throw ParseError("config: q must lie in [0, 1]");
    if (c.bootstrap == 0) throw ParseError("config: bootstrap must be at least 1");
    if (c.p_max == 0) throw ParseError("config: p_max must be at least 1");
    return job;
}

void write_report_json(std::ostream& out, const PipelineReport& report) {
    const auto& c = report.config;
    json doc;
    doc["config"] = {{"from", date_or_null(c.from)},
                     {"to", date_or_null(c.to)},
                     {"q", c.q},
                     {"bootstrap", c.bootstrap},
                     {"seed", c.seed},
                     {"p_max", c.p_max},
                     {"max_diff", c.max_diff},
                     {"min_overlap", c.min_overlap},
                     {"adf_trend", c.adf_trend},
                     {"family", to_string(c.family)}};
    json groups = json::array();
    for (const auto& g : report.groups) {
        groups.push_back({{"name", g.name},
                          {"first", g.first.to_string()},
                          {"last", g.last.to_string()},
                          {"aligned", g.aligned},
                          {"individual_d", g.individual_d},
                          {"d", g.d},
                          {"lag", g.lag}});
    }
    doc["groups"] = groups;
    json tests = json::array();
    json arrows = json::array();
    for (const auto& t : report.tests) {
        json row = {{"group", t.group},
                    {"cause", t.cause},
                    {"effect", t.effect},
                    {"conditioned_on", t.conditioned_on},
                    {"f1", t.pgc.f1},
                    {"p", t.pgc.p_value},
                    {"p_bh_rejected", t.rejected},
                    {"sign", to_string(t.pgc.direction_sign)},
                    {"mean_cause_coefficient", t.pgc.mean_cause_coefficient},
                    {"lag", t.pgc.lag},
                    {"d", t.d},
                    {"bootstrap_reps", t.pgc.bootstrap_reps},
                    {"dw", t.pgc.dw_stats},
                    {"dw_flags", t.pgc.dw_flags}};
        tests.push_back(row);
        if (t.rejected) {
            arrows.push_back({{"group", t.group},
                              {"from", t.cause},
                              {"to", t.effect},
                              {"sign", to_string(t.pgc.direction_sign)}});
        }
    }
    doc["tests"] = tests;
    doc["arrows"] = arrows;
    out << doc.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const PipelineReport& report) {
    csv::write_record(out, {"group", "cause", "effect", "conditioned_on", "f1", "p", "p_bh_rejected", "sign", "lag",
                            "d", "dw_flags"});
    for (const auto& t : report.tests) {
        std::string flags;
        for (std::size_t i = 0; i < t.pgc.dw_flags.size(); ++i) {
            if (i) flags += '|';
            flags += t.pgc.dw_flags[i] ? '1' : '0';
        }
        csv::write_record(out, {t.group, t.cause, t.effect, t.conditioned_on, csv::format_double(t.pgc.f1, 12),
                                csv::format_double(t.pgc.p_value, 12), t.rejected ? "true" : "false",
                                to_string(t.pgc.direction_sign), std::to_string(t.pgc.lag), std::to_string(t.d),
                                flags});
    }
}

}  // namespace webeco::causality
