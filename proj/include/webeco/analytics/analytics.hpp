#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "webeco/graph/graph.hpp"

namespace webeco::analytics {

using graph::Category;
using graph::DomainGraph;
using graph::Group;

/// Targets of the domain's out-edges. Unknown domain gives an empty set.
std::set<std::string> out_domains(const DomainGraph& g, const std::string& domain);
/// Union of out_domains over every member of the group.
std::set<std::string> out_domains(const DomainGraph& g, const Group& group);

/// Distinct labeled source domains per category for the edges into `domain`.
/// Every labeled category not in `exclude` appears in the map, zero-filled.
std::map<Category, std::size_t> in_sources_by_category(const DomainGraph& g, const std::string& domain,
                                                       const std::set<Category>& exclude = {});

struct SharedOutlinkOptions {
    /// Drop member domains of both groups from both out-sets before comparing.
    bool exclude_members = true;
};

/// |out(A) ∩ out(B)| / |out(A)| × 100. Throws UndefinedMetricError when either group
/// has no out-links or out(A) is empty after member exclusion.
double shared_outlink_pct(const DomainGraph& g, const Group& a, const Group& b,
                          const SharedOutlinkOptions& options = {});

inline constexpr std::size_t kDefaultMinConnections = 100;

/// Fraction of the domain's out-domains that the reference set also links to.
/// nullopt when the domain has fewer than `min_connections` out-domains (or none).
std::optional<double> overlap_similarity(const DomainGraph& g, const std::string& domain,
                                         const std::vector<std::string>& reference,
                                         std::size_t min_connections = kDefaultMinConnections);

/// Same, against a precomputed reference out-union.
std::optional<double> overlap_similarity(const DomainGraph& g, const std::string& domain,
                                         const std::set<std::string>& reference_out,
                                         std::size_t min_connections);

struct Candidate {
    std::string domain;
    double similarity = 0.0;

    bool operator==(const Candidate&) const = default;
};

/// Non-seed domains ranked by overlap similarity to the seed set (descending, ties
/// lexicographic), truncated to k. k == 0 yields an empty list. Throws
/// ArgumentError if a seed is not a node.
std::vector<Candidate> discover_candidates(const DomainGraph& g, const std::vector<std::string>& seeds,
                                           std::size_t k,
                                           std::size_t min_connections = kDefaultMinConnections);

/// Strictly more distinct conspiracy sources than authentic sources and than non-news
/// sources; misinformation sources never count.
bool conspiracy_oriented(const DomainGraph& g, const std::string& domain);

/// Every node for which conspiracy_oriented holds.
std::set<std::string> conspiracy_oriented_domains(const DomainGraph& g);

enum class Granularity { Year, Month, Day };

/// Parses "year", "month" or "day". Throws ArgumentError.
Granularity parse_granularity(std::string_view text);

struct TrendPoint {
    std::string period;  // "2020", "2020-03" or "2020-03-14"
    Date period_start;
    double value = 0.0;  // percent in [0, 100]
    std::size_t n_sources = 0;

    bool operator==(const TrendPoint&) const = default;
};

struct TrendOptions {
    /// false: mean of per-source percentages. true: one pooled ratio over all links.
    bool pooled = false;
};

/// Per period, the percentage of dated links from the source group that point at
/// conspiracy-oriented domains. Periods without dated links are omitted.
std::vector<TrendPoint> conspiracy_oriented_pct_series(const DomainGraph& g, const Group& sources,
                                                       Granularity granularity,
                                                       const TrendOptions& options = {});

struct LinkedDomain {
    std::string domain;
    std::uint64_t unique_urls = 0;

    bool operator==(const LinkedDomain&) const = default;
};

/// Members of `to` ranked by unique URL pairs received from members of `from`
/// (descending, ties lexicographic). k == 0 returns every linked target.
std::vector<LinkedDomain> top_linked(const DomainGraph& g, const Group& from, const Group& to,
                                     std::size_t k);

struct MannWhitneyResult {
    double u = 0.0;        // U statistic of sample a
    double p_value = 1.0;  // two-sided; exact when `exact`
    double p_normal = 1.0; // tie-corrected normal approximation with continuity correction
    bool exact = false;
};

inline constexpr std::size_t kMannWhitneyExactLimit = 12;

/// Throws ArgumentError on an empty sample.
MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

/// reject_i iff p_i <= alpha / m.
std::vector<bool> bonferroni(const std::vector<double>& pvals, double alpha);

}  // namespace webeco::analytics
