#include "webeco/graph/graph.hpp"

#include <array>
#include <cstring>
#include <istream>
#include <ostream>

#include "webeco/csv.hpp"
#include "webeco/error.hpp"

namespace webeco::graph {

namespace {

const std::set<std::string> kNoNeighbours;

constexpr std::array<char, 8> kSnapshotMagic = {'W', 'E', 'B', 'E', 'C', 'O', 'G', '1'};

void add_tally(PairTally& into, const PairTally& from) {
    for (const auto& [date, count] : from.dated) into.dated[date] += count;
    into.undated += from.undated;
}

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void u64(std::uint64_t v) {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
        out_.write(reinterpret_cast<const char*>(buf), 8);
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ostream& out_;
};

class BinaryReader {
public:
    explicit BinaryReader(std::istream& in) : in_(in) {}

    std::uint64_t u64() {
        unsigned char buf[8];
        if (!in_.read(reinterpret_cast<char*>(buf), 8)) throw ParseError("truncated graph snapshot");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    std::string str() {
        const auto n = u64();
        if (n > (std::uint64_t{1} << 32)) throw ParseError("corrupt graph snapshot (string length)");
        std::string s(n, '\0');
        if (!in_.read(s.data(), static_cast<std::streamsize>(n))) throw ParseError("truncated graph snapshot");
        return s;
    }

private:
    std::istream& in_;
};

std::uint8_t encode_label(const CategoryLabel& label) {
    const auto c = static_cast<std::uint8_t>(label.category());
    const std::uint8_t s = label.subcategory() ? static_cast<std::uint8_t>(*label.subcategory()) + 1 : 0;
    return static_cast<std::uint8_t>(c << 4 | s);
}

CategoryLabel decode_label(std::uint64_t code) {
    const auto c = code >> 4;
    const auto s = code & 0xF;
    if (c > static_cast<std::uint64_t>(Category::Unlabeled) || s > 5) throw ParseError("corrupt graph snapshot (label)");
    std::optional<Subcategory> sub;
    if (s) sub = static_cast<Subcategory>(s - 1);
    try {
        return CategoryLabel(static_cast<Category>(c), sub);
    } catch (const ArgumentError&) {
        throw ParseError("corrupt graph snapshot (label)");
    }
}

}  // namespace

std::uint64_t EdgeStats::dated_records() const {
    std::uint64_t total = 0;
    for (const auto& [date, count] : daily_counts) total += count;
    return total;
}

DomainGraph::DomainGraph() : nodes_(std::make_shared<NodeMap>()) {}

NodeMap& DomainGraph::mutable_nodes() {
    if (nodes_.use_count() > 1) nodes_ = std::make_shared<NodeMap>(*nodes_);
    return *nodes_;
}

void DomainGraph::ensure_node(const std::string& domain) {
    if (!has_node(domain)) mutable_nodes().emplace(domain, CategoryLabel{});
}

void DomainGraph::set_label(const std::string& domain, const CategoryLabel& label) {
    mutable_nodes()[domain] = label;
}

void DomainGraph::link(const std::string& source, const std::string& target) {
    out_[source].insert(target);
    in_[target].insert(source);
}

bool DomainGraph::add(const ingest::LinkRecord& record) {
    if (record.source_domain == record.target_domain) return false;
    ensure_node(record.source_domain);
    ensure_node(record.target_domain);
    EdgeStats& stats = edges_[{record.source_domain, record.target_domain}];
    PairTally& tally = stats.pairs[{record.source_url, record.target_url}];
    if (record.publication_date) {
        ++tally.dated[*record.publication_date];
        ++stats.daily_counts[*record.publication_date];
    } else {
        ++tally.undated;
        ++stats.undated;
    }
    link(record.source_domain, record.target_domain);
    return true;
}

CategoryLabel DomainGraph::label(std::string_view domain) const {
    const auto it = nodes_->find(domain);
    return it == nodes_->end() ? CategoryLabel{} : it->second;
}

const EdgeStats* DomainGraph::edge(const std::string& source, const std::string& target) const {
    const auto it = edges_.find({source, target});
    return it == edges_.end() ? nullptr : &it->second;
}

const std::set<std::string>& DomainGraph::successors(const std::string& domain) const {
    const auto it = out_.find(domain);
    return it == out_.end() ? kNoNeighbours : it->second;
}

const std::set<std::string>& DomainGraph::predecessors(const std::string& domain) const {
    const auto it = in_.find(domain);
    return it == in_.end() ? kNoNeighbours : it->second;
}

std::vector<std::string> DomainGraph::members(const Group& group) const {
    std::vector<std::string> out;
    for (const auto& [domain, label] : *nodes_) {
        if (group_contains(group, label)) out.push_back(domain);
    }
    return out;
}

DomainGraph DomainGraph::window(Date from, Date to) const {
    if (to < from) throw ArgumentError("window start " + from.to_string() + " is after end " + to.to_string());
    DomainGraph view;
    view.nodes_ = nodes_;
    for (const auto& [key, stats] : edges_) {
        EdgeStats restricted;
        for (const auto& [pair, tally] : stats.pairs) {
            PairTally kept;
            for (auto it = tally.dated.lower_bound(from); it != tally.dated.end() && it->first <= to; ++it) {
                kept.dated.insert(*it);
                restricted.daily_counts[it->first] += it->second;
            }
            if (!kept.dated.empty()) restricted.pairs.emplace(pair, std::move(kept));
        }
        if (!restricted.pairs.empty()) {
            view.edges_.emplace(key, std::move(restricted));
            view.link(key.first, key.second);
        }
    }
    return view;
}

DomainGraph DomainGraph::merge(const DomainGraph& a, const DomainGraph& b) {
    DomainGraph out;
    NodeMap& nodes = out.mutable_nodes();
    nodes = a.nodes();
    for (const auto& [domain, label] : b.nodes()) {
        auto [it, inserted] = nodes.emplace(domain, label);
        if (inserted || it->second == label) continue;
        if (it->second.category() == Category::Unlabeled) {
            it->second = label;
        } else if (label.category() != Category::Unlabeled) {
            throw ArgumentError("conflicting labels for " + domain + " while merging graphs");
        }
    }
    out.edges_ = a.edges_;
    out.out_ = a.out_;
    out.in_ = a.in_;
    for (const auto& [key, stats] : b.edges_) {
        EdgeStats& into = out.edges_[key];
        for (const auto& [pair, tally] : stats.pairs) add_tally(into.pairs[pair], tally);
        for (const auto& [date, count] : stats.daily_counts) into.daily_counts[date] += count;
        into.undated += stats.undated;
        out.link(key.first, key.second);
    }
    return out;
}

bool DomainGraph::operator==(const DomainGraph& other) const {
    return nodes() == other.nodes() && edges_ == other.edges_;
}

void DomainGraph::write_edges_csv(std::ostream& out) const {
    csv::write_record(out, {"source", "target", "unique_pairs", "undated"});
    for (const auto& [key, stats] : edges_) {
        csv::write_record(out, {key.first, key.second, std::to_string(stats.unique_url_pairs()),
                                std::to_string(stats.undated)});
    }
}

void DomainGraph::write_edge_dates_csv(std::ostream& out) const {
    csv::write_record(out, {"source", "target", "date", "count"});
    for (const auto& [key, stats] : edges_) {
        for (const auto& [date, count] : stats.daily_counts) {
            csv::write_record(out, {key.first, key.second, date.to_string(), std::to_string(count)});
        }
    }
}

void DomainGraph::write_nodes_csv(std::ostream& out) const {
    csv::write_record(out, {"domain", "category", "subcategory"});
    for (const auto& [domain, label] : nodes()) {
        csv::write_record(out, {domain, std::string(to_string(label.category())),
                                label.subcategory() ? std::string(to_string(*label.subcategory())) : ""});
    }
}

void DomainGraph::save_binary(std::ostream& out) const {
    out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
    BinaryWriter w(out);
    w.u64(nodes().size());
    for (const auto& [domain, label] : nodes()) {
        w.str(domain);
        w.u64(encode_label(label));
    }
    w.u64(edges_.size());
    for (const auto& [key, stats] : edges_) {
        w.str(key.first);
        w.str(key.second);
        w.u64(stats.pairs.size());
        for (const auto& [pair, tally] : stats.pairs) {
            w.str(pair.first);
            w.str(pair.second);
            w.u64(tally.undated);
            w.u64(tally.dated.size());
            for (const auto& [date, count] : tally.dated) {
                w.i64(date.serial());
                w.u64(count);
            }
        }
    }
    if (!out) throw Error("failed writing graph snapshot");
}

DomainGraph DomainGraph::load_binary(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kSnapshotMagic) {
        throw ParseError("not a graph snapshot (bad magic)");
    }
    BinaryReader r(in);
    DomainGraph g;
    NodeMap& nodes = g.mutable_nodes();
    const auto node_count = r.u64();
    for (std::uint64_t i = 0; i < node_count; ++i) {
        std::string domain = r.str();
        nodes.emplace(std::move(domain), decode_label(r.u64()));
    }
    const auto edge_count = r.u64();
    for (std::uint64_t e = 0; e < edge_count; ++e) {
        std::string source = r.str();
        std::string target = r.str();
        if (source == target || !g.has_node(source) || !g.has_node(target)) {
            throw ParseError("corrupt graph snapshot (edge endpoints)");
        }
        EdgeStats& stats = g.edges_[{source, target}];
        const auto pair_count = r.u64();
        if (pair_count == 0) throw ParseError("corrupt graph snapshot (empty edge)");
        for (std::uint64_t p = 0; p < pair_count; ++p) {
            std::string su = r.str();
            std::string tu = r.str();
            PairTally& tally = stats.pairs[{std::move(su), std::move(tu)}];
            tally.undated = r.u64();
            stats.undated += tally.undated;
            const auto dates = r.u64();
            for (std::uint64_t d = 0; d < dates; ++d) {
                const Date date = Date::from_serial(r.i64());
                const auto count = r.u64();
                tally.dated[date] += count;
                stats.daily_counts[date] += count;
            }
        }
        g.link(source, target);
    }
    return g;
}

DomainGraph build_graph(const std::vector<ingest::LinkRecord>& records, const LabelTable& labels) {
    DomainGraph g;
    for (const auto& [domain, label] : labels) g.set_label(domain, label);
    for (const auto& record : records) g.add(record);
    return g;
}

}  // namespace webeco::graph
