#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "webeco/date.hpp"
#include "webeco/graph/labels.hpp"
#include "webeco/ingest/ingest.hpp"

namespace webeco::graph {

using UrlPair = std::pair<std::string, std::string>;
using EdgeKey = std::pair<std::string, std::string>;  // (source_domain, target_domain)

/// Record counts of one distinct (source_url, target_url) pair.
struct PairTally {
    std::map<Date, std::uint64_t> dated;
    std::uint64_t undated = 0;

    bool operator==(const PairTally&) const = default;
};

/// Per-edge statistics. `unique_url_pairs()` counts distinct URL pairs, while
/// `daily_counts` and `undated` count records.
struct EdgeStats {
    std::map<UrlPair, PairTally> pairs;
    std::map<Date, std::uint64_t> daily_counts;
    std::uint64_t undated = 0;

    std::uint64_t unique_url_pairs() const { return pairs.size(); }
    std::uint64_t dated_records() const;
    std::uint64_t records() const { return dated_records() + undated; }

    bool operator==(const EdgeStats&) const = default;
};

using NodeMap = std::map<std::string, CategoryLabel, std::less<>>;
using EdgeMap = std::map<EdgeKey, EdgeStats>;

/// Domain-level directed hyperlink graph. No self-edges; every stored edge has at
/// least one URL pair. Node labels are shared between a graph and its windowed views.
class DomainGraph {
public:
    DomainGraph();

    /// Labels a domain, adding it as a node. A node table shared with windowed views
    /// is copied before the first write.
    void set_label(const std::string& domain, const CategoryLabel& label);

    /// Inserts one link record. Same-domain records are ignored (returns false).
    bool add(const ingest::LinkRecord& record);

    const NodeMap& nodes() const { return *nodes_; }
    const EdgeMap& edges() const { return edges_; }

    CategoryLabel label(std::string_view domain) const;
    bool has_node(std::string_view domain) const { return nodes_->find(domain) != nodes_->end(); }
    const EdgeStats* edge(const std::string& source, const std::string& target) const;

    /// Direct successors / predecessors (sorted, distinct).
    const std::set<std::string>& successors(const std::string& domain) const;
    const std::set<std::string>& predecessors(const std::string& domain) const;

    /// Domains whose label falls in the group, sorted.
    std::vector<std::string> members(const Group& group) const;

    /// Dated records inside [from, to]; undated records dropped, nodes unchanged.
    /// Throws ArgumentError when from > to.
    DomainGraph window(Date from, Date to) const;

    /// Order-independent union (associative and commutative).
    static DomainGraph merge(const DomainGraph& a, const DomainGraph& b);

    bool operator==(const DomainGraph& other) const;

    // CSV export: graph.csv (source,target,unique_pairs,undated), edge_dates.csv
    // (source,target,date,count) and nodes.csv (domain,category,subcategory).
    void write_edges_csv(std::ostream& out) const;
    void write_edge_dates_csv(std::ostream& out) const;
    void write_nodes_csv(std::ostream& out) const;

    /// Compact binary snapshot including URL pairs. Throws ParseError on bad input.
    void save_binary(std::ostream& out) const;
    static DomainGraph load_binary(std::istream& in);

private:
    void ensure_node(const std::string& domain);
    void link(const std::string& source, const std::string& target);
    NodeMap& mutable_nodes();

    std::shared_ptr<NodeMap> nodes_;
    EdgeMap edges_;
    std::map<std::string, std::set<std::string>, std::less<>> out_;
    std::map<std::string, std::set<std::string>, std::less<>> in_;
};

/// Deterministic graph from records and labels; independent of record order.
/// Labeled domains without links are still nodes.
DomainGraph build_graph(const std::vector<ingest::LinkRecord>& records, const LabelTable& labels);

}  // namespace webeco::graph
