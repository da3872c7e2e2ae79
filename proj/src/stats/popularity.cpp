#include "webeco/stats/popularity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>

#include "webeco/csv.hpp"
#include "webeco/error.hpp"
#include "webeco/ingest/html.hpp"

namespace webeco::stats {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

void RankTable::set(Date date, const std::string& domain, std::uint32_t rank) {
    if (rank == 0) throw ArgumentError("ranks start at 1 (domain " + domain + ")");
    by_date_[date][domain] = rank;
}

const DomainRanks* RankTable::on(Date date) const {
    const auto it = by_date_.find(date);
    return it == by_date_.end() ? nullptr : &it->second;
}

RankTable RankTable::since(Date from) const {
    RankTable out;
    for (auto it = by_date_.lower_bound(from); it != by_date_.end(); ++it) out.by_date_.insert(*it);
    return out;
}

RankTable read_ranks_csv(std::istream& in) {
    RankTable table;
    csv::read(in, {"date", "domain", "rank"}, [&](const std::vector<std::string>& row, std::size_t line) {
        const Date date = Date::parse(row[0]);
        unsigned long rank = 0;
        try {
            std::size_t used = 0;
            rank = std::stoul(row[2], &used);
            if (used != row[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("ranks.csv line " + std::to_string(line) + ": bad rank '" + row[2] + "'");
        }
        if (rank == 0 || rank > 0xFFFFFFFFul) {
            throw ParseError("ranks.csv line " + std::to_string(line) + ": rank out of range");
        }
        table.set(date, ascii_lower(row[1]), static_cast<std::uint32_t>(rank));
    });
    return table;
}

TimeSeries median_rank_series(const RankTable& ranks, const std::set<std::string>& group, std::size_t window_days) {
    if (window_days == 0) throw ArgumentError("median_rank_series window must be at least 1");
    std::vector<Date> dates;
    std::vector<double> medians;
    if (group.empty()) return {};
    for (const auto& [date, day] : ranks.by_date()) {
        std::vector<double> present;
        for (const auto& member : group) {
            if (auto it = day.find(member); it != day.end()) present.push_back(static_cast<double>(it->second));
        }
        if (present.empty()) continue;
        dates.push_back(date);
        medians.push_back(median(std::move(present)));
    }
    return trailing_moving_average(TimeSeries(std::move(dates), std::move(medians)), window_days);
}

double dcg(const DomainRanks& ranks, const std::set<std::string>& group, std::uint32_t floor_rank) {
    if (group.empty()) throw ArgumentError("dcg of an empty group");
    double total = 0.0;
    for (const auto& member : group) {
        const auto it = ranks.find(member);
        const double r = static_cast<double>(it == ranks.end() ? floor_rank : it->second);
        total += 1.0 / std::log2(r + 1.0);
    }
    return total;
}

TimeSeries dcg_series(const RankTable& ranks, const std::set<std::string>& group, std::uint32_t floor_rank,
                      std::optional<Date> from, std::optional<Date> to) {
    std::vector<Date> dates;
    std::vector<double> values;
    for (const auto& [date, day] : ranks.by_date()) {
        if ((from && date < *from) || (to && *to < date)) continue;
        dates.push_back(date);
        values.push_back(dcg(day, group, floor_rank));
    }
    return TimeSeries(std::move(dates), std::move(values));
}

std::vector<MentionDocument> mention_documents(const std::vector<ingest::PageRecord>& pages) {
    std::vector<MentionDocument> docs;
    docs.reserve(pages.size());
    for (const auto& page : pages) {
        MentionDocument doc;
        doc.text = ingest::visible_text(page.body);
        if (page.publication_date) {
            doc.publication_date = page.publication_date;
        } else if (auto url = ingest::Url::try_parse(page.url)) {
            doc.publication_date = ingest::extract_publication_date(page.body, *url, page.fetch_time.date());
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

TimeSeries mention_series(const std::vector<MentionDocument>& docs, const std::string& keyword, Date from, Date to) {
    if (keyword.empty()) throw ArgumentError("mention_series keyword must be non-empty");
    if (to < from) throw ArgumentError("mention_series range is inverted");
    const std::string needle = ascii_lower(keyword);
    const auto days = static_cast<std::size_t>(to.serial() - from.serial() + 1);
    std::vector<double> counts(days, 0.0);
    for (const auto& doc : docs) {
        if (!doc.publication_date || *doc.publication_date < from || to < *doc.publication_date) continue;
        if (ascii_lower(doc.text).find(needle) == std::string::npos) continue;
        counts[static_cast<std::size_t>(doc.publication_date->serial() - from.serial())] += 1.0;
    }
    return TimeSeries::daily(from, std::move(counts));
}

}  // namespace webeco::stats
