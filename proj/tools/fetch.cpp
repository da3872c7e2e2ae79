#include "fetch.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "webeco/ingest/url.hpp"

namespace webeco::cli {

namespace {

Timestamp now_or(const std::optional<Timestamp>& stamp) {
    if (stamp) return *stamp;
    using namespace std::chrono;
    return Timestamp{duration_cast<seconds>(system_clock::now().time_since_epoch()).count()};
}

}  // namespace

ingest::Fetcher http_fetcher(int timeout_seconds, std::optional<Timestamp> stamp) {
    return [timeout_seconds, stamp](const std::string& text) {
        ingest::FetchResult r;
        r.fetch_time = now_or(stamp);
        const auto url = ingest::Url::try_parse(text);
        if (!url) {
            r.error = "unparseable URL";
            return r;
        }
        std::string origin = url->scheme + "://" + url->host;
        if (url->port) origin += ":" + std::to_string(*url->port);
        httplib::Client client(origin);
        client.set_connection_timeout(timeout_seconds, 0);
        client.set_read_timeout(timeout_seconds, 0);
        client.set_follow_location(false);
        std::string target = url->path;
        if (url->query) target += "?" + *url->query;
        auto res = client.Get(target);
        if (!res) {
            r.error = httplib::to_string(res.error());
        } else if (res->status != 200) {
            r.error = "HTTP " + std::to_string(res->status);
        } else {
            r.body = res->body;
        }
        return r;
    };
}

ingest::Fetcher mirror_fetcher(const std::string& dir, std::optional<Timestamp> stamp) {
    return [root = std::filesystem::path(dir), stamp](const std::string& text) {
        ingest::FetchResult r;
        r.fetch_time = now_or(stamp);
        const auto url = ingest::Url::try_parse(text);
        if (!url) {
            r.error = "unparseable URL";
            return r;
        }
        std::string rel = url->path;
        if (rel.empty() || rel.back() == '/') rel += "index.html";
        const auto file = root / url->host / std::filesystem::path(rel).relative_path();
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            r.error = "not in mirror: " + file.string();
            return r;
        }
        std::ostringstream body;
        body << in.rdbuf();
        r.body = body.str();
        return r;
    };
}

}  // namespace webeco::cli
