#include "webeco/ingest/crawl.hpp"

#include <deque>
#include <map>
#include <set>
#include <thread>

#include "webeco/error.hpp"
#include "webeco/ingest/html.hpp"
#include "webeco/ingest/public_suffix.hpp"
#include "webeco/ingest/url.hpp"

namespace webeco::ingest {

CrawlClock CrawlClock::steady() {
    const auto start = std::chrono::steady_clock::now();
    return CrawlClock{
        [start] {
            return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        },
        [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }};
}

CrawlResult crawl(const CrawlFrontier& frontier, const Fetcher& fetcher, const CrawlClock& clock) {
    CrawlResult result;
    std::deque<std::pair<Url, std::size_t>> queue;
    std::set<std::string> visited;
    std::set<std::string> beyond;
    std::map<std::string, std::chrono::milliseconds> last_fetch;

    for (const auto& seed : frontier.seed_urls) {
        auto url = Url::try_parse(seed);
        if (!url) throw ArgumentError("seed is not an absolute http(s) URL: " + seed);
        if (visited.insert(url->to_string()).second) queue.emplace_back(*url, 0);
    }

    while (!queue.empty()) {
        auto [url, hop] = std::move(queue.front());
        queue.pop_front();
        const std::string key = url.to_string();
        const std::string domain = canonical_host(url.host);

        if (auto it = last_fetch.find(domain); it != last_fetch.end()) {
            const auto ready_at = it->second + frontier.politeness_delay;
            const auto now = clock.now();
            if (now < ready_at) {
                clock.sleep(ready_at - now);
                result.report.total_wait += ready_at - now;
            }
        }
        FetchResult fetched = fetcher(key);
        last_fetch[domain] = clock.now();
        if (!fetched.body) {
            ++result.report.errors;
            result.report.failed_urls.push_back(key);
            continue;
        }
        ++result.report.fetched;

        PageRecord page;
        page.url = key;
        page.fetch_time = fetched.fetch_time;
        page.body = std::move(*fetched.body);
        page.out_links = extract_links(page.body, url).links;
        page.publication_date = extract_publication_date(page.body, url, page.fetch_time.date());

        for (const auto& link : page.out_links) {
            const auto target = Url::try_parse(link);
            if (!target || canonical_host(target->host) != domain) continue;
            const std::string target_key = target->to_string();
            if (visited.contains(target_key)) continue;
            if (hop + 1 > frontier.hop_limit) {
                if (beyond.insert(target_key).second) result.report.beyond_limit.push_back(target_key);
                continue;
            }
            visited.insert(target_key);
            queue.emplace_back(*target, hop + 1);
        }
        result.pages.push_back(FetchedPage{std::move(page), hop});
    }
    return result;
}

}  // namespace webeco::ingest
