#include "webeco/analytics/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "webeco/error.hpp"

namespace webeco::analytics {

namespace {

void erase_members(std::set<std::string>& set, const std::vector<std::string>& members) {
    for (const auto& m : members) set.erase(m);
}

std::pair<std::string, Date> period_of(Date d, Granularity granularity) {
    char buf[16];
    switch (granularity) {
        case Granularity::Year:
            std::snprintf(buf, sizeof buf, "%04d", d.year());
            return {buf, Date::from_ymd(d.year(), 1, 1)};
        case Granularity::Month:
            std::snprintf(buf, sizeof buf, "%04d-%02u", d.year(), d.month());
            return {buf, Date::from_ymd(d.year(), d.month(), 1)};
        case Granularity::Day:
            break;
    }
    return {d.to_string(), d};
}

// Midranks (1-based) of the pooled values.
std::vector<double> midranks(const std::vector<double>& pooled) {
    std::vector<std::size_t> order(pooled.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> ranks(pooled.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

double normal_two_sided(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

}  // namespace

std::set<std::string> out_domains(const DomainGraph& g, const std::string& domain) {
    return g.successors(domain);
}

std::set<std::string> out_domains(const DomainGraph& g, const Group& group) {
    std::set<std::string> out;
    for (const auto& member : g.members(group)) {
        const auto& succ = g.successors(member);
        out.insert(succ.begin(), succ.end());
    }
    return out;
}

std::map<Category, std::size_t> in_sources_by_category(const DomainGraph& g, const std::string& domain,
                                                       const std::set<Category>& exclude) {
    std::map<Category, std::size_t> counts;
    for (Category c : graph::kAllCategories) {
        if (c != Category::Unlabeled && !exclude.contains(c)) counts[c] = 0;
    }
    for (const auto& source : g.predecessors(domain)) {
        const Category c = g.label(source).category();
        if (auto it = counts.find(c); it != counts.end()) ++it->second;
    }
    return counts;
}

double shared_outlink_pct(const DomainGraph& g, const Group& a, const Group& b,
                          const SharedOutlinkOptions& options) {
    auto out_a = out_domains(g, a);
    auto out_b = out_domains(g, b);
    if (out_a.empty() || out_b.empty()) {
        throw UndefinedMetricError("shared_outlink_pct: group '" +
                                   graph::to_string(out_a.empty() ? a : b) + "' has no out-links");
    }
    if (options.exclude_members) {
        const auto members_a = g.members(a);
        const auto members_b = g.members(b);
        for (auto* set : {&out_a, &out_b}) {
            erase_members(*set, members_a);
            erase_members(*set, members_b);
        }
    }
    if (out_a.empty()) {
        throw UndefinedMetricError("shared_outlink_pct: no out-domains of '" + graph::to_string(a) +
                                   "' remain after member exclusion");
    }
    std::size_t shared = 0;
    for (const auto& d : out_a) shared += out_b.contains(d) ? 1 : 0;
    return 100.0 * static_cast<double>(shared) / static_cast<double>(out_a.size());
}

std::optional<double> overlap_similarity(const DomainGraph& g, const std::string& domain,
                                         const std::set<std::string>& reference_out,
                                         std::size_t min_connections) {
    const auto& out = g.successors(domain);
    if (out.empty() || out.size() < min_connections) return std::nullopt;
    std::size_t shared = 0;
    for (const auto& d : out) shared += reference_out.contains(d) ? 1 : 0;
    return static_cast<double>(shared) / static_cast<double>(out.size());
}

std::optional<double> overlap_similarity(const DomainGraph& g, const std::string& domain,
                                         const std::vector<std::string>& reference,
                                         std::size_t min_connections) {
    std::set<std::string> reference_out;
    for (const auto& r : reference) {
        const auto& succ = g.successors(r);
        reference_out.insert(succ.begin(), succ.end());
    }
    return overlap_similarity(g, domain, reference_out, min_connections);
}

std::vector<Candidate> discover_candidates(const DomainGraph& g, const std::vector<std::string>& seeds,
                                           std::size_t k, std::size_t min_connections) {
    if (k == 0) return {};
    std::set<std::string> seed_set;
    std::set<std::string> reference_out;
    for (const auto& s : seeds) {
        if (!g.has_node(s)) throw ArgumentError("seed '" + s + "' is not a node of the graph");
        seed_set.insert(s);
        const auto& succ = g.successors(s);
        reference_out.insert(succ.begin(), succ.end());
    }
    std::vector<Candidate> ranked;
    for (const auto& [domain, label] : g.nodes()) {
        if (seed_set.contains(domain)) continue;
        if (auto sim = overlap_similarity(g, domain, reference_out, min_connections)) {
            ranked.push_back({domain, *sim});
        }
    }
    std::sort(ranked.begin(), ranked.end(), [](const Candidate& x, const Candidate& y) {
        if (x.similarity != y.similarity) return x.similarity > y.similarity;
        return x.domain < y.domain;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

bool conspiracy_oriented(const DomainGraph& g, const std::string& domain) {
    const auto counts = in_sources_by_category(g, domain, {Category::Misinformation});
    const auto conspiracy = counts.at(Category::Conspiracy);
    return conspiracy > counts.at(Category::Authentic) && conspiracy > counts.at(Category::NonNews);
}

std::set<std::string> conspiracy_oriented_domains(const DomainGraph& g) {
    std::set<std::string> out;
    for (const auto& [domain, label] : g.nodes()) {
        if (conspiracy_oriented(g, domain)) out.insert(domain);
    }
    return out;
}

Granularity parse_granularity(std::string_view text) {
    if (text == "year") return Granularity::Year;
    if (text == "month") return Granularity::Month;
    if (text == "day") return Granularity::Day;
    throw ArgumentError("granularity must be year, month or day (got '" + std::string(text) + "')");
}

std::vector<TrendPoint> conspiracy_oriented_pct_series(const DomainGraph& g, const Group& sources,
                                                       Granularity granularity, const TrendOptions& options) {
    const auto oriented = conspiracy_oriented_domains(g);
    struct Tally {
        std::uint64_t oriented = 0;
        std::uint64_t total = 0;
    };
    // period -> (start, source -> tally)
    std::map<std::string, std::pair<Date, std::map<std::string, Tally>>> periods;
    for (const auto& source : g.members(sources)) {
        for (const auto& target : g.successors(source)) {
            const bool hit = oriented.contains(target);
            for (const auto& [date, count] : g.edge(source, target)->daily_counts) {
                auto [label, start] = period_of(date, granularity);
                auto& slot = periods[label];
                slot.first = start;
                Tally& t = slot.second[source];
                t.total += count;
                if (hit) t.oriented += count;
            }
        }
    }
    std::vector<TrendPoint> series;
    for (const auto& [label, slot] : periods) {
        const auto& per_source = slot.second;
        double value = 0.0;
        if (options.pooled) {
            std::uint64_t hit = 0, total = 0;
            for (const auto& [source, t] : per_source) {
                hit += t.oriented;
                total += t.total;
            }
            value = 100.0 * static_cast<double>(hit) / static_cast<double>(total);
        } else {
            double sum = 0.0;
            for (const auto& [source, t] : per_source) {
                sum += 100.0 * static_cast<double>(t.oriented) / static_cast<double>(t.total);
            }
            value = sum / static_cast<double>(per_source.size());
        }
        series.push_back({label, slot.first, value, per_source.size()});
    }
    return series;
}

std::vector<LinkedDomain> top_linked(const DomainGraph& g, const Group& from, const Group& to, std::size_t k) {
    std::map<std::string, std::uint64_t> totals;
    for (const auto& source : g.members(from)) {
        for (const auto& target : g.successors(source)) {
            if (!graph::group_contains(to, g.label(target))) continue;
            totals[target] += g.edge(source, target)->unique_url_pairs();
        }
    }
    std::vector<LinkedDomain> rows;
    for (const auto& [domain, count] : totals) rows.push_back({domain, count});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const LinkedDomain& x, const LinkedDomain& y) { return x.unique_urls > y.unique_urls; });
    if (k != 0 && rows.size() > k) rows.resize(k);
    return rows;
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ArgumentError("mann_whitney_u: both samples must be non-empty");
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size(), n = pooled.size();
    const auto ranks = midranks(pooled);
    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) rank_sum_a += ranks[i];

    MannWhitneyResult result;
    result.u = rank_sum_a - static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;
    if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); })) {
        result.p_value = result.p_normal = 1.0;
        result.exact = n <= kMannWhitneyExactLimit;
        return result;
    }

    const double mean_u = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
    std::map<double, std::size_t> ties;
    for (double v : pooled) ++ties[v];
    double tie_term = 0.0;
    for (const auto& [value, t] : ties) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double nd = static_cast<double>(n);
    const double var_u = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                         ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
    const double deviation = std::fabs(result.u - mean_u);
    if (var_u > 0.0) {
        const double z = std::max(0.0, deviation - 0.5) / std::sqrt(var_u);
        result.p_normal = std::min(1.0, normal_two_sided(z));
    }

    if (n <= kMannWhitneyExactLimit) {
        // Enumerate every assignment of na of the pooled midranks to sample a.
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(na), true);
        std::size_t total = 0, extreme = 0;
        const double shift = static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;
        std::sort(pick.begin(), pick.end(), std::greater<>());
        do {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (pick[i]) sum += ranks[i];
            }
            ++total;
            if (std::fabs(sum - shift - mean_u) >= deviation - 1e-9) ++extreme;
        } while (std::prev_permutation(pick.begin(), pick.end()));
        result.p_value = static_cast<double>(extreme) / static_cast<double>(total);
        result.exact = true;
    } else {
        result.p_value = result.p_normal;
    }
    return result;
}

std::vector<bool> bonferroni(const std::vector<double>& pvals, double alpha) {
    std::vector<bool> reject(pvals.size(), false);
    if (pvals.empty()) return reject;
    const double threshold = alpha / static_cast<double>(pvals.size());
    for (std::size_t i = 0; i < pvals.size(); ++i) {
        if (pvals[i] < 0.0 || pvals[i] > 1.0) throw ArgumentError("bonferroni: p-value outside [0, 1]");
        reject[i] = pvals[i] <= threshold;
    }
    return reject;
}

}  // namespace webeco::analytics
