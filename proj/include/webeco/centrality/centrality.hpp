#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "webeco/graph/graph.hpp"

namespace webeco::centrality {

using ScoreMap = std::map<std::string, double>;

/// Compact, index-based view of a DomainGraph's unweighted structure. Node i is the
/// i-th domain in lexicographic order; adjacency lists are sorted and distinct.
struct Digraph {
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::vector<std::size_t>> in;

    static Digraph from(const graph::DomainGraph& g);
    /// Throws ArgumentError on out-of-range endpoints; self-loops and repeats are dropped.
    static Digraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t size() const { return names.size(); }
    std::size_t edge_count() const;
};

enum class Orientation {
    Inbound,   // H(v) sums over nodes that can reach v
    Outbound,  // H(v) sums over nodes v can reach
};

/// Harmonic centrality on unweighted shortest paths. BFS sources run on up to
/// `jobs` threads; results do not depend on the worker count.
std::vector<double> harmonic(const Digraph& g, Orientation orientation = Orientation::Inbound,
                             std::size_t jobs = 1);
ScoreMap harmonic(const graph::DomainGraph& g, Orientation orientation = Orientation::Inbound,
                  std::size_t jobs = 1);

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-10;
    std::size_t max_iter = 10'000;
};

/// Power iteration with uniform teleport; dangling mass is spread uniformly.
/// Converged when the L1 change drops below tol. Throws ConvergenceError otherwise,
/// and ArgumentError for damping outside (0, 1).
std::vector<double> pagerank(const Digraph& g, const PageRankOptions& options = {});
ScoreMap pagerank(const graph::DomainGraph& g, const PageRankOptions& options = {});

struct HitsOptions {
    double tol = 1e-12;
    std::size_t max_iter = 1'000;
};

struct HitsScores {
    std::vector<double> hub;
    std::vector<double> authority;
    bool edgeless = false;  // all-zero scores were returned
    std::size_t iterations = 0;
};

/// Alternating power iteration from a uniform hub vector with L2 normalization after
/// each half-step. Throws ConvergenceError if max_iter is reached.
HitsScores hits(const Digraph& g, const HitsOptions& options = {});

struct Standardized {
    std::optional<std::vector<double>> z;  // nullopt when the variance is zero
    std::vector<double> percentile;        // (below + 0.5 * equal) / n * 100
};

/// Population z-scores and midpoint percentiles.
Standardized standardize(const std::vector<double>& values);

/// z-scores only. Throws UndefinedMetricError when all values are equal.
std::vector<double> z_scores(const std::vector<double>& values);
std::vector<double> percentiles(const std::vector<double>& values);

struct CentralityRow {
    std::string domain;
    double harmonic = 0.0;
    double pagerank = 0.0;
    double hub = 0.0;
    double authority = 0.0;
    std::optional<double> z_harmonic;
    double pct_harmonic = 0.0;
    std::optional<double> z_pagerank;
    double pct_pagerank = 0.0;
};

struct CentralityOptions {
    Orientation orientation = Orientation::Inbound;
    PageRankOptions pagerank;
    HitsOptions hits;
    std::size_t jobs = 1;
};

struct CentralityReport {
    std::vector<CentralityRow> rows;  // lexicographic by domain
    std::size_t population = 0;       // nodes the standardization ran over
    bool hits_edgeless = false;
};

CentralityReport centrality_report(const graph::DomainGraph& g, const CentralityOptions& options = {});

/// centrality.csv: domain,harmonic,pagerank,hub,authority,z_harmonic,pct_harmonic,z_pagerank,pct_pagerank
void write_centrality_csv(std::ostream& out, const CentralityReport& report);

}  // namespace webeco::centrality
