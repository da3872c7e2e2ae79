#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "webeco/date.hpp"
#include "webeco/ingest/ingest.hpp"
#include "webeco/stats/timeseries.hpp"

namespace webeco::stats {

using DomainRanks = std::map<std::string, std::uint32_t, std::less<>>;

/// (date, domain) -> popularity rank, 1 = most popular.
class RankTable {
public:
    /// Throws ArgumentError for rank 0.
    void set(Date date, const std::string& domain, std::uint32_t rank);

    const std::map<Date, DomainRanks>& by_date() const { return by_date_; }
    const DomainRanks* on(Date date) const;
    bool empty() const { return by_date_.empty(); }

    /// Entries dated before `from` are discarded (e.g. a ranking methodology change).
    RankTable since(Date from) const;

private:
    std::map<Date, DomainRanks> by_date_;
};

/// ranks.csv: date,domain,rank. Throws ParseError.
RankTable read_ranks_csv(std::istream& in);

/// Median rank over group members ranked that day (mean of the middle pair for
/// even counts), then a trailing `window_days` moving average. Days without any
/// ranked member are skipped; an empty group yields an empty series.
TimeSeries median_rank_series(const RankTable& ranks, const std::set<std::string>& group,
                              std::size_t window_days = 30);

inline constexpr std::uint32_t kDefaultDcgFloor = 1'000'000;

/// Binary DCG: sum over members of 1 / log2(r + 1), with r = floor_rank for
/// members missing from `ranks`. Throws ArgumentError for an empty group.
double dcg(const DomainRanks& ranks, const std::set<std::string>& group,
           std::uint32_t floor_rank = kDefaultDcgFloor);

/// DCG for every date of the table (optionally restricted to [from, to]).
TimeSeries dcg_series(const RankTable& ranks, const std::set<std::string>& group,
                      std::uint32_t floor_rank = kDefaultDcgFloor, std::optional<Date> from = std::nullopt,
                      std::optional<Date> to = std::nullopt);

/// A dated text document for mention counting.
struct MentionDocument {
    std::optional<Date> publication_date;
    std::string text;
};

/// Visible text and publication date of each page (dates as ingest would extract them).
std::vector<MentionDocument> mention_documents(const std::vector<ingest::PageRecord>& pages);

/// Per day in [from, to], the number of documents published that day whose text
/// contains `keyword` (ASCII case-insensitive). Zero-filled; undated documents are
/// ignored. Throws ArgumentError for an empty keyword or from > to.
TimeSeries mention_series(const std::vector<MentionDocument>& docs, const std::string& keyword, Date from, Date to);

}  // namespace webeco::stats
