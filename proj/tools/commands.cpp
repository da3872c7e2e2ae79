#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "webeco/analytics/analytics.hpp"
#include "webeco/causality/pipeline.hpp"
#include "webeco/centrality/centrality.hpp"
#include "webeco/csv.hpp"
#include "webeco/error.hpp"
#include "webeco/graph/graph.hpp"
#include "webeco/ingest/crawl.hpp"
#include "webeco/ingest/ingest.hpp"
#include "webeco/ingest/url.hpp"
#include "webeco/scoring/fringe.hpp"
#include "webeco/stats/popularity.hpp"

#include "fetch.hpp"

namespace webeco::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using csv::format_double;

Date date_flag(const std::string& text, const std::string& flag) {
    if (auto d = Date::try_parse(text)) return *d;
    throw UsageError("--" + flag + " expects YYYY-MM-DD, got '" + text + "'");
}

std::optional<Date> optional_date(const std::string& text, const std::string& flag) {
    if (text.empty()) return std::nullopt;
    return date_flag(text, flag);
}

graph::Group group_flag(const std::string& text, const std::string& flag) {
    try {
        return graph::parse_group(text);
    } catch (const ArgumentError&) {
        throw UsageError("--" + flag + ": unknown group '" + text + "'");
    }
}

graph::LabelTable load_labels(const std::string& path, Manifest& manifest) {
    auto in = open_input(path);
    manifest.inputs.push_back(path);
    return graph::read_labels_csv(in);
}

graph::DomainGraph load_graph(const std::string& path, Manifest& manifest) {
    auto in = open_input(path);
    manifest.inputs.push_back(path);
    return graph::DomainGraph::load_binary(in);
}

std::vector<ingest::PageEntry> load_pages(const std::string& path, Manifest& manifest) {
    auto in = open_input(path);
    manifest.inputs.push_back(path);
    return ingest::read_pages_jsonl(in);
}

/// Applies an optional [from, to] window; an open end stays open.
graph::DomainGraph windowed(const graph::DomainGraph& g, const std::string& from, const std::string& to) {
    if (from.empty() && to.empty()) return g;
    const Date lo = from.empty() ? earliest_web_date() : date_flag(from, "from");
    const Date hi = to.empty() ? Date::from_ymd(9999, 12, 31) : date_flag(to, "to");
    if (lo > hi) throw UsageError("--from is after --to");
    return g.window(lo, hi);
}

std::vector<std::string> read_lines(const std::string& path, Manifest& manifest) {
    auto in = open_input(path);
    manifest.inputs.push_back(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(line.substr(first, line.find_last_not_of(" \t") - first + 1));
    }
    return out;
}

std::size_t worker_count(const Globals& g) { return g.jobs; }

// ---- extract ---------------------------------------------------------------

Command extract_command(CLI::App& app, const Globals& globals) {
    struct Opts {
        std::string pages, labels, out, report, mode = "registered";
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("extract", "Extract dated external links from a pages.jsonl corpus");
    sub->add_option("--pages", o->pages, "pages.jsonl input")->required();
    sub->add_option("--labels", o->labels, "labels.csv, used to count unlabeled source pages");
    sub->add_option("--out", o->out, "links.csv output")->required();
    sub->add_option("--report", o->report, "Ingest report JSON output");
    sub->add_option("--domain-mode", o->mode, "registered or multilabel")
        ->check(CLI::IsMember({"registered", "multilabel"}))
        ->capture_default_str();
    return {sub, {"out", "report"}, [o, &globals](OutputSet& outputs, Manifest& manifest) {
                const auto entries = load_pages(o->pages, manifest);
                graph::LabelTable labels;
                if (!o->labels.empty()) labels = load_labels(o->labels, manifest);
                ingest::IngestOptions options;
                options.domain_mode =
                    o->mode == "multilabel" ? ingest::DomainMode::MultiLabel : ingest::DomainMode::Registered;
                options.jobs = worker_count(globals);
                const auto result = ingest::ingest_pages(entries, labels, options);
                ingest::write_links_csv(outputs.open(o->out), result.links);
                const auto& r = result.report;
                if (!o->report.empty()) {
                    ojson j = {{"pages", r.pages},
                               {"links", r.links},
                               {"dateless_pages", r.dateless_pages},
                               {"dropped_internal", r.dropped_internal},
                               {"dropped_scheme", r.dropped_scheme},
                               {"unresolvable", r.unresolvable},
                               {"unreadable_pages", r.unreadable_pages},
                               {"corrupt_entries", r.corrupt_entries},
                               {"unlabeled_sources", r.unlabeled_sources}};
                    outputs.open(o->report) << j.dump(2) << '\n';
                }
                return std::to_string(r.links) + " links from " + std::to_string(r.pages) + " pages (" +
                       std::to_string(r.corrupt_entries) + " corrupt entries skipped)";
            }};
}

// ---- crawl -----------------------------------------------------------------

Command crawl_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::vector<std::string> seed_urls;
        std::string seeds_file, out, report, mirror, fetch_time;
        std::size_t hops = 10;
        long delay_ms = 1000;
        int timeout_s = 30;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("crawl", "Breadth-first crawl of seed sites into pages.jsonl");
    sub->add_option("--seed-url", o->seed_urls, "Seed URL (repeatable)");
    sub->add_option("--seeds-file", o->seeds_file, "File with one seed URL per line");
    sub->add_option("--out", o->out, "pages.jsonl output")->required();
    sub->add_option("--report", o->report, "Crawl report JSON output");
    sub->add_option("--hops", o->hops, "Hop limit from each seed")->capture_default_str();
    sub->add_option("--delay-ms", o->delay_ms, "Politeness delay between requests to one host")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--mirror", o->mirror, "Read pages from a local mirror (DIR/host/path) instead of the network");
    sub->add_option("--fetch-time", o->fetch_time, "RFC 3339 fetch time stamped on mirrored pages");
    sub->add_option("--timeout", o->timeout_s, "Network timeout in seconds")->capture_default_str();
    return {sub, {"out", "report"}, [o](OutputSet& outputs, Manifest& manifest) {
                ingest::CrawlFrontier frontier;
                frontier.seed_urls = o->seed_urls;
                if (!o->seeds_file.empty()) {
                    for (auto& s : read_lines(o->seeds_file, manifest)) frontier.seed_urls.push_back(s);
                }
                if (frontier.seed_urls.empty()) throw UsageError("give --seed-url or --seeds-file");
                for (const auto& s : frontier.seed_urls) {
                    if (!ingest::Url::try_parse(s)) throw UsageError("not an http(s) URL: " + s);
                }
                frontier.hop_limit = o->hops;
                frontier.politeness_delay = std::chrono::milliseconds(o->delay_ms);

                std::optional<Timestamp> stamp;
                if (!o->fetch_time.empty()) {
                    stamp = Timestamp::try_parse_rfc3339(o->fetch_time);
                    if (!stamp) throw UsageError("--fetch-time expects an RFC 3339 timestamp");
                }
                const ingest::Fetcher fetcher = o->mirror.empty() ? http_fetcher(o->timeout_s, stamp)
                                                                  : mirror_fetcher(o->mirror, stamp);
                const auto result = ingest::crawl(frontier, fetcher);
                auto& out = outputs.open(o->out);
                for (const auto& fp : result.pages) out << ingest::to_jsonl(fp.page) << '\n';
                const auto& r = result.report;
                if (!o->report.empty()) {
                    ojson j = {{"fetched", r.fetched},
                               {"errors", r.errors},
                               {"failed_urls", r.failed_urls},
                               {"beyond_limit", r.beyond_limit},
                               {"total_wait_ms", r.total_wait.count()}};
                    outputs.open(o->report) << j.dump(2) << '\n';
                }
                return std::to_string(r.fetched) + " pages fetched, " + std::to_string(r.errors) + " errors";
            }};
}

// ---- graph -----------------------------------------------------------------

Command graph_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::vector<std::string> links;
        std::string labels, out, edges_csv, edge_dates_csv, nodes_csv, from, to;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("graph", "Build the labeled domain graph from link records");
    sub->add_option("--links", o->links, "links.csv input (repeatable; graphs are merged)")->required();
    sub->add_option("--labels", o->labels, "labels.csv")->required();
    sub->add_option("--out", o->out, "Binary graph snapshot")->required();
    sub->add_option("--edges-csv", o->edges_csv, "source,target,unique_pairs,undated");
    sub->add_option("--edge-dates-csv", o->edge_dates_csv, "source,target,date,count");
    sub->add_option("--nodes-csv", o->nodes_csv, "domain,category,subcategory");
    sub->add_option("--from", o->from, "Keep dated records on or after this day");
    sub->add_option("--to", o->to, "Keep dated records on or before this day");
    return {sub, {"out", "edges-csv", "edge-dates-csv", "nodes-csv"}, [o](OutputSet& outputs, Manifest& manifest) {
                const auto labels = load_labels(o->labels, manifest);
                std::vector<ingest::LinkRecord> records;
                for (const auto& path : o->links) {
                    auto in = open_input(path);
                    manifest.inputs.push_back(path);
                    auto more = ingest::read_links_csv(in);
                    records.insert(records.end(), more.begin(), more.end());
                }
                const auto g = windowed(graph::build_graph(records, labels), o->from, o->to);
                g.save_binary(outputs.open(o->out));
                if (!o->edges_csv.empty()) g.write_edges_csv(outputs.open(o->edges_csv));
                if (!o->edge_dates_csv.empty()) g.write_edge_dates_csv(outputs.open(o->edge_dates_csv));
                if (!o->nodes_csv.empty()) g.write_nodes_csv(outputs.open(o->nodes_csv));
                return std::to_string(g.nodes().size()) + " nodes, " + std::to_string(g.edges().size()) + " edges";
            }};
}

// ---- similarity ------------------------------------------------------------

std::vector<std::string> all_group_names() {
    std::vector<std::string> out;
    for (auto c : graph::kAllCategories) {
        if (c != graph::Category::Unlabeled) out.emplace_back(graph::to_string(c));
    }
    for (auto s : graph::kAllSubcategories) out.emplace_back(graph::to_string(s));
    return out;
}

Command similarity_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::string graph, out;
        std::vector<std::string> groups;
        bool include_members = false;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("similarity", "Shared out-link percentages between every ordered pair of groups");
    sub->add_option("--graph", o->graph, "Binary graph")->required();
    sub->add_option("--out", o->out, "group_a,group_b,shared_pct")->required();
    sub->add_option("--groups", o->groups, "Groups to compare (default: every category and subcategory)");
    sub->add_flag("--include-members", o->include_members, "Keep the groups' own members in the out-sets");
    return {sub, {"out"}, [o](OutputSet& outputs, Manifest& manifest) {
                const auto g = load_graph(o->graph, manifest);
                const auto names = o->groups.empty() ? all_group_names() : o->groups;
                std::vector<graph::Group> groups;
                for (const auto& n : names) groups.push_back(group_flag(n, "groups"));
                analytics::SharedOutlinkOptions options;
                options.exclude_members = !o->include_members;
                auto& out = outputs.open(o->out);
                csv::write_record(out, {"group_a", "group_b", "shared_pct"});
                std::size_t defined = 0, undefined = 0;
                for (const auto& a : groups) {
                    for (const auto& b : groups) {
                        if (a == b) continue;
                        std::string value;
                        try {
                            value = format_double(analytics::shared_outlink_pct(g, a, b, options));
                            ++defined;
                        } catch (const UndefinedMetricError&) {
                            ++undefined;
                        }
                        csv::write_record(out, {graph::to_string(a), graph::to_string(b), value});
                    }
                }
                return std::to_string(defined) + " pairs scored, " + std::to_string(undefined) + " undefined";
            }};
}

// ---- discover --------------------------------------------------------------

Command discover_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::string graph, out, seed_group;
        std::vector<std::string> seed_domains;
        std::size_t k = 50;
        std::size_t min_connections = analytics::kDefaultMinConnections;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("discover", "Rank candidate domains by out-link overlap with a seed set");
    sub->add_option("--graph", o->graph, "Binary graph")->required();
    sub->add_option("--out", o->out, "rank,domain,similarity")->required();
    auto* sd = sub->add_option("--seed-domain", o->seed_domains, "Seed domain (repeatable)");
    auto* sg = sub->add_option("--seed-group", o->seed_group, "Use every member of a group as seeds");
    sd->excludes(sg);
    sub->add_option("--k", o->k, "Number of candidates")->capture_default_str();
    sub->add_option("--min-connections", o->min_connections, "Minimum out-domains for a candidate")
        ->capture_default_str();
    return {sub, {"out"}, [o](OutputSet& outputs, Manifest& manifest) {
                const auto g = load_graph(o->graph, manifest);
                auto seeds = o->seed_domains;
                if (!o->seed_group.empty()) seeds = g.members(group_flag(o->seed_group, "seed-group"));
                if (seeds.empty()) throw UsageError("give --seed-domain or a non-empty --seed-group");
                std::vector<analytics::Candidate> found;
                try {
                    found = analytics::discover_candidates(g, seeds, o->k, o->min_connections);
                } catch (const ArgumentError& e) {
                    throw DataError(e.what());
                }
                auto& out = outputs.open(o->out);
                csv::write_record(out, {"rank", "domain", "similarity"});
                for (std::size_t i = 0; i < found.size(); ++i) {
                    csv::write_record(out, {std::to_string(i + 1), found[i].domain, format_double(found[i].similarity)});
                }
                return std::to_string(found.size()) + " candidates from " + std::to_string(seeds.size()) + " seeds";
            }};
}

// ---- oriented --------------------------------------------------------------

std::string subcategory_text(const graph::CategoryLabel& l) {
    return l.subcategory() ? std::string(graph::to_string(*l.subcategory())) : std::string();
}

Command oriented_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::string graph, out;
        bool only = false;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("oriented", "Classify domains as conspiracy-oriented from their in-link sources");
    sub->add_option("--graph", o->graph, "Binary graph")->required();
    sub->add_option("--out", o->out,
                    "domain,category,subcategory,conspiracy_sources,authentic_sources,nonnews_sources,oriented")
        ->required();
    sub->add_flag("--only-oriented", o->only, "List oriented domains only");
    return {sub, {"out"}, [o](OutputSet& outputs, Manifest& manifest) {
                const auto g = load_graph(o->graph, manifest);
                auto& out = outputs.open(o->out);
                csv::write_record(out, {"domain", "category", "subcategory", "conspiracy_sources",
                                        "authentic_sources", "nonnews_sources", "oriented"});
                std::size_t oriented = 0;
                for (const auto& [domain, label] : g.nodes()) {
                    const bool is = analytics::conspiracy_oriented(g, domain);
                    oriented += is;
                    if (o->only && !is) continue;
                    auto by = analytics::in_sources_by_category(g, domain);
                    csv::write_record(out, {domain, std::string(graph::to_string(label.category())),
                                            subcategory_text(label),
                                            std::to_string(by[graph::Category::Conspiracy]),
                                            std::to_string(by[graph::Category::Authentic]),
                                            std::to_string(by[graph::Category::NonNews]), is ? "1" : "0"});
                }
                return std::to_string(oriented) + " of " + std::to_string(g.nodes().size()) +
                       " domains conspiracy-oriented";
            }};
}

// ---- trend -----------------------------------------------------------------

Command trend_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::string graph, out, sources = "authentic", granularity = "month", from, to;
        bool pooled = false;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("trend", "Share of a group's links pointing at conspiracy-oriented domains over time");
    sub->add_option("--graph", o->graph, "Binary graph")->required();
    sub->add_option("--out", o->out, "period,period_start,value,n_sources")->required();
    sub->add_option("--sources", o->sources, "Source group")->capture_default_str();
    sub->add_option("--granularity", o->granularity, "year, month or day")
        ->check(CLI::IsMember({"year", "month", "day"}))
        ->capture_default_str();
    sub->add_flag("--pooled", o->pooled, "One pooled ratio per period instead of the mean over sources");
    sub->add_option("--from", o->from, "First day of the window");
    sub->add_option("--to", o->to, "Last day of the window");
    return {sub, {"out"}, [o](OutputSet& outputs, Manifest& manifest) {
                const auto g = windowed(load_graph(o->graph, manifest), o->from, o->to);
                analytics::TrendOptions options;
                options.pooled = o->pooled;
                const auto series = analytics::conspiracy_oriented_pct_series(
                    g, group_flag(o->sources, "sources"), analytics::parse_granularity(o->granularity), options);
                auto& out = outputs.open(o->out);
                csv::write_record(out, {"period", "period_start", "value", "n_sources"});
                for (const auto& p : series) {
                    csv::write_record(out, {p.period, p.period_start.to_string(), format_double(p.value),
                                            std::to_string(p.n_sources)});
                }
                return std::to_string(series.size()) + " periods";
            }};
}

// ---- centrality ------------------------------------------------------------

Command centrality_command(CLI::App& app, const Globals& globals) {
    struct Opts {
        std::string graph, out, orientation = "inbound";
        centrality::PageRankOptions pr;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("centrality", "Harmonic, PageRank and HITS scores with z-scores and percentiles");
    sub->add_option("--graph", o->graph, "Binary graph")->required();
    sub->add_option("--out", o->out, "centrality.csv")->required();
    sub->add_option("--orientation", o->orientation, "Harmonic orientation: inbound or outbound")
        ->check(CLI::IsMember({"inbound", "outbound"}))
        ->capture_default_str();
    sub->add_option("--damping", o->pr.damping, "PageRank damping factor")->capture_default_str();
    sub->add_option("--tol", o->pr.tol, "PageRank L1 tolerance")->capture_default_str();
    sub->add_option("--max-iter", o->pr.max_iter, "PageRank iteration cap")->capture_default_str();
    return {sub, {"out"}, [o, &globals](OutputSet& outputs, Manifest& manifest) {
                if (!(o->pr.damping > 0.0 && o->pr.damping < 1.0)) throw UsageError("--damping must lie in (0, 1)");
                const auto g = load_graph(o->graph, manifest);
                centrality::CentralityOptions options;
                options.orientation = o->orientation == "outbound" ? centrality::Orientation::Outbound
                                                                   : centrality::Orientation::Inbound;
                options.pagerank = o->pr;
                options.jobs = worker_count(globals);
                const auto report = centrality::centrality_report(g, options);
                centrality::write_centrality_csv(outputs.open(o->out), report);
                return std::to_string(report.rows.size()) + " domains scored, z-scores over a population of " +
                       std::to_string(report.population) + (report.hits_edgeless ? " (no edges: HITS all zero)" : "");
            }};
}

// ---- popularity ------------------------------------------------------------

Command popularity_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::string ranks, labels, group, domains_file, out, metric = "dcg", since, from, to;
        std::size_t window = 30;
        std::uint32_t floor = stats::kDefaultDcgFloor;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("popularity", "Daily popularity series of a domain group from rank lists");
    sub->add_option("--ranks", o->ranks, "ranks.csv (date,domain,rank)")->required();
    sub->add_option("--labels", o->labels, "labels.csv, with --group");
    auto* grp = sub->add_option("--group", o->group, "Category or subcategory to aggregate");
    auto* df = sub->add_option("--domains-file", o->domains_file, "File with one member domain per line");
    grp->excludes(df);
    sub->add_option("--out", o->out, "date,value")->required();
    sub->add_option("--metric", o->metric, "dcg or median")
        ->check(CLI::IsMember({"dcg", "median"}))
        ->capture_default_str();
    sub->add_option("--window", o->window, "Moving-average window in days (median)")->capture_default_str();
    sub->add_option("--floor", o->floor, "Rank assigned to unranked members (dcg)")->capture_default_str();
    sub->add_option("--since", o->since, "Discard rank lists dated before this day");
    sub->add_option("--from", o->from, "First day of the output");
    sub->add_option("--to", o->to, "Last day of the output");
    return {sub, {"out"}, [o](OutputSet& outputs, Manifest& manifest) {
                std::set<std::string> members;
                if (!o->group.empty()) {
                    if (o->labels.empty()) throw UsageError("--group needs --labels");
                    const auto group = group_flag(o->group, "group");
                    for (const auto& [d, l] : load_labels(o->labels, manifest)) {
                        if (graph::group_contains(group, l)) members.insert(d);
                    }
                } else if (!o->domains_file.empty()) {
                    for (auto& d : read_lines(o->domains_file, manifest)) members.insert(d);
                } else {
                    throw UsageError("give --group with --labels, or --domains-file");
                }
                if (members.empty()) throw DataError("the domain group is empty");
                auto in = open_input(o->ranks);
                manifest.inputs.push_back(o->ranks);
                auto ranks = stats::read_ranks_csv(in);
                if (!o->since.empty()) ranks = ranks.since(date_flag(o->since, "since"));
                const auto from = optional_date(o->from, "from");
                const auto to = optional_date(o->to, "to");
                stats::TimeSeries series;
                if (o->metric == "dcg") {
                    series = stats::dcg_series(ranks, members, o->floor, from, to);
                } else {
                    series = stats::median_rank_series(ranks, members, o->window);
                    if (from || to) {
                        series = series.slice(from.value_or(earliest_web_date()),
                                              to.value_or(Date::from_ymd(9999, 12, 31)));
                    }
                }
                stats::write_series_csv(outputs.open(o->out), series);
                return std::to_string(series.size()) + " days, " + std::to_string(members.size()) + " member domains";
            }};
}

// ---- mentions --------------------------------------------------------------

Command mentions_command(CLI::App& app, const Globals&) {
    struct Opts {
        std::string pages, keyword, from, to, out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("mentions", "Daily count of pages mentioning a keyword");
    sub->add_option("--pages", o->pages, "pages.jsonl input")->required();
    sub->add_option("--keyword", o->keyword, "Keyword (ASCII case-insensitive)")->required();
    sub->add_option("--from", o->from, "First day")->required();
    sub->add_option("--to", o->to, "Last day")->required();
    sub->add_option("--out", o->out, "date,value")->required();
    return {sub, {"out"}, [o](OutputSet& outputs, Manifest& manifest) {
                const Date from = date_flag(o->from, "from");
                const Date to = date_flag(o->to, "to");
                if (from > to) throw UsageError("--from is after --to");
                if (o->keyword.empty()) throw UsageError("--keyword is empty");
                std::vector<ingest::PageRecord> pages;
                for (auto& e : load_pages(o->pages, manifest)) {
                    if (e.page) pages.push_back(std::move(*e.page));
                }
                const auto series =
                    stats::mention_series(stats::mention_documents(pages), o->keyword, from, to);
                stats::write_series_csv(outputs.open(o->out), series);
                double total = 0;
                for (double v : series.values()) total += v;
                return format_double(total) + " mentions over " + std::to_string(series.size()) + " days";
            }};
}

// ---- causality -------------------------------------------------------------

/// Series files named in a job description, for the manifest.
std::vector<fs::path> job_series_paths(const fs::path& job_path) {
    std::vector<fs::path> out;
    std::ifstream in(job_path);
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return out;
    auto collect = [&](const nlohmann::json& series) {
        if (!series.is_object()) return;
        for (const char* role : {"x", "y", "z"}) {
            if (series.contains(role) && series[role].is_object() && series[role].contains("path") &&
                series[role]["path"].is_string()) {
                fs::path p = series[role]["path"].get<std::string>();
                out.push_back(p.is_absolute() ? p : job_path.parent_path() / p);
            }
        }
    };
    if (doc.contains("groups") && doc["groups"].is_array()) {
        for (const auto& g : doc["groups"]) {
            if (g.is_object() && g.contains("series")) collect(g["series"]);
        }
    } else if (doc.contains("series")) {
        collect(doc["series"]);
    }
    return out;
}

Command causality_command(CLI::App& app, const Globals& globals) {
    struct Opts {
        std::string job, out_json, out_csv, family, from, to;
        std::size_t bootstrap = 0, p_max = 0, min_overlap = 0;
        double q = 0.0;
        bool trend = false;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("causality", "Partial Granger causality tests with BH correction");
    sub->add_option("--config", o->job, "JSON job: series groups and test settings")->required();
    sub->add_option("--out-json", o->out_json, "Report JSON")->required();
    sub->add_option("--out-csv", o->out_csv, "One row per tested direction");
    auto* b = sub->add_option("--bootstrap", o->bootstrap, "Bootstrap replicates per test");
    auto* q = sub->add_option("--q", o->q, "False discovery rate");
    auto* p = sub->add_option("--p-max", o->p_max, "Largest VAR order considered by BIC");
    auto* mo = sub->add_option("--min-overlap", o->min_overlap, "Minimum number of common dates");
    sub->add_option("--family", o->family, "BH family: joint or per_group")
        ->check(CLI::IsMember({"joint", "per_group"}));
    sub->add_option("--from", o->from, "First day of the analysis window");
    sub->add_option("--to", o->to, "Last day of the analysis window");
    sub->add_flag("--trend", o->trend, "Include a linear trend in the unit-root regressions");
    return {sub, {"out-json", "out-csv"}, [o, &globals, b, q, p, mo](OutputSet& outputs, Manifest& manifest) {
                const fs::path job_path = o->job;
                auto in = open_input(job_path);
                manifest.inputs.push_back(job_path);
                auto job = causality::load_pipeline_job(in, job_path.parent_path());
                for (auto& s : job_series_paths(job_path)) manifest.inputs.push_back(s);
                auto& c = job.config;
                if (b->count()) c.bootstrap = o->bootstrap;
                if (q->count()) c.q = o->q;
                if (p->count()) c.p_max = o->p_max;
                if (mo->count()) c.min_overlap = o->min_overlap;
                if (!o->family.empty()) c.family = causality::parse_fdr_family(o->family);
                if (!o->from.empty()) c.from = date_flag(o->from, "from");
                if (!o->to.empty()) c.to = date_flag(o->to, "to");
                if (o->trend) c.adf_trend = true;
                if (globals.seed_given) c.seed = globals.seed;
                if (globals.jobs_given) c.jobs = globals.jobs;
                if (c.bootstrap == 0) throw UsageError("--bootstrap must be positive");
                if (!(c.q > 0.0 && c.q < 1.0)) throw UsageError("--q must lie in (0, 1)");
                manifest.seed = c.seed;
                const auto report = causality::causality_pipeline(job.groups, c);
                causality::write_report_json(outputs.open(o->out_json), report);
                if (!o->out_csv.empty()) causality::write_report_csv(outputs.open(o->out_csv), report);
                const auto arrows = report.arrows();
                return std::to_string(report.tests.size()) + " directions tested, " + std::to_string(arrows.size()) +
                       " significant after BH";
            }};
}

// ---- fringe ----------------------------------------------------------------

Command fringe_command(CLI::App& app, const Globals& globals) {
    struct Opts {
        std::string input, model, model_out, scores_out, metrics_out;
        double fraction = 0.8;
        scoring::TrainOptions train;
        bool simplified = false;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("fringe", "Train, evaluate or apply the fringe-score classifier");
    sub->add_option("--input", o->input, "domain,partisanship,conspiracy_pct,label")->required();
    sub->add_option("--model", o->model, "Score --input with this model instead of training");
    sub->add_option("--model-out", o->model_out, "Trained model JSON");
    sub->add_option("--scores-out", o->scores_out, "domain,score for every input row");
    sub->add_option("--metrics-out", o->metrics_out, "Held-out evaluation JSON");
    sub->add_option("--fraction", o->fraction, "Training share per label")->capture_default_str();
    sub->add_option("--c", o->train.c, "Soft-margin penalty")->capture_default_str();
    sub->add_option("--tol", o->train.tol, "Optimizer tolerance")->capture_default_str();
    sub->add_flag("--simplified", o->simplified, "Skip Platt calibration: score = 1/(1+exp(-f))");
    return {sub, {"model-out", "scores-out", "metrics-out"}, [o, &globals](OutputSet& outputs, Manifest& manifest) {
                auto in = open_input(o->input);
                manifest.inputs.push_back(o->input);
                const auto samples = scoring::read_fringe_csv(in);
                if (!o->model.empty()) {
                    if (!o->model_out.empty() || !o->metrics_out.empty()) {
                        throw UsageError("--model scores only; --model-out and --metrics-out need training");
                    }
                    if (o->scores_out.empty()) throw UsageError("--model needs --scores-out");
                    auto min = open_input(o->model);
                    manifest.inputs.push_back(o->model);
                    const auto model = scoring::read_model_json(min);
                    scoring::write_scores_csv(outputs.open(o->scores_out), model, samples);
                    return std::to_string(samples.size()) + " domains scored";
                }
                if (!(o->fraction > 0.0 && o->fraction < 1.0)) throw UsageError("--fraction must lie in (0, 1)");
                if (o->model_out.empty() && o->scores_out.empty() && o->metrics_out.empty()) {
                    throw UsageError("nothing to write: give --model-out, --scores-out or --metrics-out");
                }
                const auto split = scoring::split_train_test(samples, o->fraction, globals.seed);
                auto options = o->train;
                options.mode = o->simplified ? scoring::CalibrationMode::Simplified : scoring::CalibrationMode::Platt;
                const auto model = scoring::train_fringe(split.train, options);
                const auto ev = scoring::evaluate(model, split.test);
                if (!o->model_out.empty()) scoring::write_model_json(outputs.open(o->model_out), model);
                if (!o->scores_out.empty()) scoring::write_scores_csv(outputs.open(o->scores_out), model, samples);
                if (!o->metrics_out.empty()) {
                    ojson j = {{"train_size", split.train.size()},
                               {"test_size", split.test.size()},
                               {"test_domains", ojson::array()},
                               {"tp", ev.tp},
                               {"fp", ev.fp},
                               {"tn", ev.tn},
                               {"fn", ev.fn},
                               {"accuracy", ev.accuracy},
                               {"precision", ev.precision},
                               {"false_positive_rate", ev.false_positive_rate},
                               {"false_negative_rate", ev.false_negative_rate},
                               {"mode", scoring::to_string(model.mode)},
                               {"warnings", model.warnings}};
                    for (const auto& s : split.test) j["test_domains"].push_back(s.domain);
                    outputs.open(o->metrics_out) << j.dump(2) << '\n';
                }
                for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';
                return "accuracy " + format_double(ev.accuracy, 4) + " on " + std::to_string(split.test.size()) +
                       " held-out domains";
            }};
}

// ---- report ----------------------------------------------------------------

Command report_command(CLI::App& app, const Globals& globals) {
    struct Opts {
        std::string graph, out, from_group = "authentic";
        std::size_t top = 10;
        double alpha = 0.05;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("report", "Summary tables for a labeled graph");
    sub->add_option("--graph", o->graph, "Binary graph")->required();
    sub->add_option("--out", o->out, "report.json")->required();
    sub->add_option("--from-group", o->from_group, "Source group for the top-linked tables")->capture_default_str();
    sub->add_option("--top", o->top, "Rows per top-linked table")->capture_default_str();
    sub->add_option("--alpha", o->alpha, "Family-wise level for the Bonferroni correction")->capture_default_str();
    return {sub, {"out"}, [o, &globals](OutputSet& outputs, Manifest& manifest) {
                const auto g = load_graph(o->graph, manifest);
                const auto from = group_flag(o->from_group, "from-group");
                ojson j;
                std::uint64_t pairs = 0;
                for (const auto& [k, e] : g.edges()) pairs += e.unique_url_pairs();
                j["nodes"] = g.nodes().size();
                j["edges"] = g.edges().size();
                j["unique_url_pairs"] = pairs;

                ojson cats = ojson::object();
                for (auto c : graph::kAllCategories) cats[std::string(graph::to_string(c))] = g.members(c).size();
                for (auto s : graph::kAllSubcategories) cats[std::string(graph::to_string(s))] = g.members(s).size();
                j["categories"] = cats;
                j["conspiracy_oriented"] = analytics::conspiracy_oriented_domains(g).size();

                ojson top = ojson::object();
                for (auto s : graph::kAllSubcategories) {
                    ojson rows = ojson::array();
                    for (const auto& l : analytics::top_linked(g, from, s, o->top)) {
                        rows.push_back({{"domain", l.domain}, {"unique_urls", l.unique_urls}});
                    }
                    top[std::string(graph::to_string(s))] = rows;
                }
                j["top_linked_from"] = graph::to_string(from);
                j["top_linked"] = top;

                const auto h = centrality::harmonic(g, centrality::Orientation::Inbound, worker_count(globals));
                std::vector<double> authentic;
                for (const auto& d : g.members(graph::Category::Authentic)) authentic.push_back(h.at(d));
                ojson tests = ojson::array();
                std::vector<double> pvals;
                if (!authentic.empty()) {
                    for (auto s : graph::kAllSubcategories) {
                        std::vector<double> sample;
                        for (const auto& d : g.members(s)) sample.push_back(h.at(d));
                        if (sample.empty()) continue;
                        const auto mw = analytics::mann_whitney_u(sample, authentic);
                        pvals.push_back(mw.p_value);
                        tests.push_back({{"subcategory", graph::to_string(s)},
                                         {"n", sample.size()},
                                         {"n_authentic", authentic.size()},
                                         {"u", mw.u},
                                         {"p_value", mw.p_value},
                                         {"exact", mw.exact}});
                    }
                }
                const auto reject = analytics::bonferroni(pvals, o->alpha);
                for (std::size_t i = 0; i < tests.size(); ++i) tests[i]["rejected"] = static_cast<bool>(reject[i]);
                j["harmonic_vs_authentic"] = {{"alpha", o->alpha}, {"tests", tests}};
                outputs.open(o->out) << j.dump(2) << '\n';
                return std::to_string(g.nodes().size()) + " nodes summarized, " + std::to_string(tests.size()) +
                       " centrality comparisons";
            }};
}

}  // namespace

std::vector<Command> make_commands(CLI::App& app, const Globals& globals) {
    return {extract_command(app, globals),    crawl_command(app, globals),      graph_command(app, globals),
            similarity_command(app, globals), discover_command(app, globals),   oriented_command(app, globals),
            trend_command(app, globals),      centrality_command(app, globals), popularity_command(app, globals),
            mentions_command(app, globals),   causality_command(app, globals),  fringe_command(app, globals),
            report_command(app, globals)};
}

}  // namespace webeco::cli
