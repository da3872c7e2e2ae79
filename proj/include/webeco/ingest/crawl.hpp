#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "webeco/ingest/ingest.hpp"

namespace webeco::ingest {

struct FetchResult {
    std::optional<std::string> body;  // nullopt on failure
    std::string error;
    Timestamp fetch_time;
};

/// Pluggable page source: one attempt per URL, never retried by the crawler.
using Fetcher = std::function<FetchResult(const std::string& url)>;

struct CrawlFrontier {
    std::vector<std::string> seed_urls;
    std::size_t hop_limit = 10;
    std::chrono::milliseconds politeness_delay{1000};
};

/// Time source and sleep hook, injectable so tests run without real waiting.
struct CrawlClock {
    std::function<std::chrono::milliseconds()> now;
    std::function<void(std::chrono::milliseconds)> sleep;

    static CrawlClock steady();
};

struct CrawlReport {
    std::size_t fetched = 0;
    std::size_t errors = 0;
    std::vector<std::string> failed_urls;
    /// Same-site URLs discovered at hop_limit + 1: enqueued conceptually but never fetched.
    std::vector<std::string> beyond_limit;
    std::chrono::milliseconds total_wait{0};
};

struct FetchedPage {
    PageRecord page;
    std::size_t hop = 0;
};

struct CrawlResult {
    std::vector<FetchedPage> pages;  // BFS order
    CrawlReport report;
};

/// Breadth-first crawl. A page fetched at hop h enqueues its same-site links (same
/// registered domain) at hop h+1; cross-site links are kept only as out_links.
/// Each URL is fetched at most once. Throws ArgumentError for unparseable seeds.
CrawlResult crawl(const CrawlFrontier& frontier, const Fetcher& fetcher,
                  const CrawlClock& clock = CrawlClock::steady());

}  // namespace webeco::ingest
