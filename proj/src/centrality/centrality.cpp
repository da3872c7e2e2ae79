#include "webeco/centrality/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "webeco/csv.hpp"
#include "webeco/error.hpp"
#include "webeco/parallel.hpp"

namespace webeco::centrality {

namespace {

ScoreMap to_map(const Digraph& g, const std::vector<double>& values) {
    ScoreMap out;
    for (std::size_t i = 0; i < g.size(); ++i) out.emplace(g.names[i], values[i]);
    return out;
}

void normalize_l2(std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

}  // namespace

Digraph Digraph::from(const graph::DomainGraph& g) {
    Digraph d;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& [domain, label] : g.nodes()) {
        index.emplace(domain, d.names.size());
        d.names.push_back(domain);
    }
    d.out.resize(d.names.size());
    d.in.resize(d.names.size());
    // edges() iterates (source, target) lexicographically, so lists come out sorted.
    for (const auto& [key, stats] : g.edges()) {
        const auto s = index.at(key.first);
        const auto t = index.at(key.second);
        d.out[s].push_back(t);
        d.in[t].push_back(s);
    }
    for (auto& list : d.in) std::sort(list.begin(), list.end());
    return d;
}

Digraph Digraph::from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Digraph d;
    d.names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) d.names.push_back("n" + std::to_string(i));
    d.out.resize(n);
    d.in.resize(n);
    for (const auto& [s, t] : edges) {
        if (s >= n || t >= n) throw ArgumentError("edge endpoint out of range");
        if (s == t) continue;
        d.out[s].push_back(t);
        d.in[t].push_back(s);
    }
    for (auto* lists : {&d.out, &d.in}) {
        for (auto& list : *lists) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }
    return d;
}

std::size_t Digraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& list : out) total += list.size();
    return total;
}

std::vector<double> harmonic(const Digraph& g, Orientation orientation, std::size_t jobs) {
    const std::size_t n = g.size();
    // Inbound scores walk edges backwards from v.
    const auto& adjacency = orientation == Orientation::Inbound ? g.in : g.out;
    std::vector<double> scores(n, 0.0);
    parallel_for(n, jobs, [&](std::size_t v) {
        std::vector<std::size_t> dist(n, 0);
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue{v};
        seen[v] = true;
        double total = 0.0;
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t w : adjacency[u]) {
                if (seen[w]) continue;
                seen[w] = true;
                dist[w] = dist[u] + 1;
                total += 1.0 / static_cast<double>(dist[w]);
                queue.push_back(w);
            }
        }
        scores[v] = total;
    });
    return scores;
}

ScoreMap harmonic(const graph::DomainGraph& g, Orientation orientation, std::size_t jobs) {
    const auto d = Digraph::from(g);
    return to_map(d, harmonic(d, orientation, jobs));
}

std::vector<double> pagerank(const Digraph& g, const PageRankOptions& options) {
    if (!(options.damping > 0.0 && options.damping < 1.0)) {
        throw ArgumentError("pagerank damping must lie in (0, 1)");
    }
    const std::size_t n = g.size();
    if (n == 0) return {};
    const double nd = static_cast<double>(n);
    const double d = options.damping;
    std::vector<double> x(n, 1.0 / nd), next(n);
    for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (g.out[u].empty()) dangling += x[u];
        }
        const double base = (1.0 - d) / nd + d * dangling / nd;
        for (std::size_t v = 0; v < n; ++v) {
            double inflow = 0.0;
            for (std::size_t u : g.in[v]) inflow += x[u] / static_cast<double>(g.out[u].size());
            next[v] = base + d * inflow;
        }
        // Renormalize to absorb rounding drift; the exact iteration preserves the sum.
        const double sum = std::accumulate(next.begin(), next.end(), 0.0);
        double delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] /= sum;
            delta += std::fabs(next[v] - x[v]);
        }
        x.swap(next);
        if (delta < options.tol) return x;
    }
    throw ConvergenceError("pagerank did not converge", options.max_iter);
}

ScoreMap pagerank(const graph::DomainGraph& g, const PageRankOptions& options) {
    const auto d = Digraph::from(g);
    return to_map(d, pagerank(d, options));
}

HitsScores hits(const Digraph& g, const HitsOptions& options) {
    const std::size_t n = g.size();
    HitsScores result;
    result.hub.assign(n, 0.0);
    result.authority.assign(n, 0.0);
    if (n == 0 || g.edge_count() == 0) {
        result.edgeless = true;
        return result;
    }
    std::vector<double> hub(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> auth(n, 0.0);
    std::vector<double> next_hub(n), next_auth(n);
    for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
        for (std::size_t v = 0; v < n; ++v) {
            double s = 0.0;
            for (std::size_t u : g.in[v]) s += hub[u];
            next_auth[v] = s;
        }
        normalize_l2(next_auth);
        for (std::size_t u = 0; u < n; ++u) {
            double s = 0.0;
            for (std::size_t v : g.out[u]) s += next_auth[v];
            next_hub[u] = s;
        }
        normalize_l2(next_hub);
        const double change = std::max(max_abs_diff(next_auth, auth), max_abs_diff(next_hub, hub));
        auth.swap(next_auth);
        hub.swap(next_hub);
        if (change < options.tol) {
            result.hub = std::move(hub);
            result.authority = std::move(auth);
            result.iterations = iter;
            return result;
        }
    }
    throw ConvergenceError("hits did not converge", options.max_iter);
}

std::vector<double> percentiles(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), values[i]);
        const auto hi = std::upper_bound(sorted.begin(), sorted.end(), values[i]);
        const double below = static_cast<double>(lo - sorted.begin());
        const double equal = static_cast<double>(hi - lo);
        out[i] = (below + 0.5 * equal) / static_cast<double>(n) * 100.0;
    }
    return out;
}

std::vector<double> z_scores(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) throw UndefinedMetricError("z-scores need at least two values");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 0.0)) throw UndefinedMetricError("z-scores undefined: zero variance");
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = (values[i] - mean) / sd;
    return z;
}

Standardized standardize(const std::vector<double>& values) {
    Standardized s;
    s.percentile = percentiles(values);
    try {
        s.z = z_scores(values);
    } catch (const UndefinedMetricError&) {
        s.z.reset();
    }
    return s;
}

CentralityReport centrality_report(const graph::DomainGraph& g, const CentralityOptions& options) {
    const auto d = Digraph::from(g);
    const auto h = harmonic(d, options.orientation, options.jobs);
    const auto pr = pagerank(d, options.pagerank);
    const auto ht = hits(d, options.hits);
    const auto sh = standardize(h);
    const auto sp = standardize(pr);

    CentralityReport report;
    report.population = d.size();
    report.hits_edgeless = ht.edgeless;
    for (std::size_t i = 0; i < d.size(); ++i) {
        CentralityRow row;
        row.domain = d.names[i];
        row.harmonic = h[i];
        row.pagerank = pr[i];
        row.hub = ht.hub[i];
        row.authority = ht.authority[i];
        if (sh.z) row.z_harmonic = (*sh.z)[i];
        row.pct_harmonic = sh.percentile[i];
        if (sp.z) row.z_pagerank = (*sp.z)[i];
        row.pct_pagerank = sp.percentile[i];
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_centrality_csv(std::ostream& out, const CentralityReport& report) {
    csv::write_record(out, {"domain", "harmonic", "pagerank", "hub", "authority", "z_harmonic", "pct_harmonic",
                            "z_pagerank", "pct_pagerank"});
    const auto opt = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); };
    for (const auto& r : report.rows) {
        csv::write_record(out, {r.domain, csv::format_double(r.harmonic), csv::format_double(r.pagerank),
                                csv::format_double(r.hub), csv::format_double(r.authority), opt(r.z_harmonic),
                                csv::format_double(r.pct_harmonic), opt(r.z_pagerank),
                                csv::format_double(r.pct_pagerank)});
    }
}

}  // namespace webeco::centrality
