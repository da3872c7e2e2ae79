#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webeco/date.hpp"
#include "webeco/graph/labels.hpp"
#include "webeco/ingest/public_suffix.hpp"

namespace webeco::ingest {

/// One fetched page. When `body` is empty and `out_links` is set, the record came
/// from a pre-extracted link log and HTML parsing is bypassed.
struct PageRecord {
    std::string url;
    Timestamp fetch_time;
    std::string body;
    std::optional<Date> publication_date;
    std::vector<std::string> out_links;
    bool pre_extracted = false;
};

struct LinkRecord {
    std::string source_url;
    std::string source_domain;
    std::string target_url;
    std::string target_domain;
    std::optional<Date> publication_date;

    auto operator<=>(const LinkRecord&) const = default;
};

struct IngestReport {
    std::size_t pages = 0;
    std::size_t links = 0;             // LinkRecords emitted
    std::size_t dateless_pages = 0;
    std::size_t dropped_internal = 0;  // same-domain anchors
    std::size_t dropped_scheme = 0;    // non-http(s) anchors
    std::size_t unresolvable = 0;      // malformed hrefs or targets without a domain
    std::size_t unreadable_pages = 0;  // binary bodies
    std::size_t corrupt_entries = 0;   // entries skipped entirely
    std::size_t unlabeled_sources = 0; // pages whose domain is not in the label table

    bool operator==(const IngestReport&) const = default;
};

struct IngestOptions {
    DomainMode domain_mode = DomainMode::Registered;
    std::size_t jobs = 1;
};

struct IngestResult {
    std::vector<LinkRecord> links;
    IngestReport report;
};

/// A pages.jsonl entry: either a parsed page or the reason it was rejected.
struct PageEntry {
    std::optional<PageRecord> page;
    std::string error;
};

/// Parses one pages.jsonl line. Never throws; failures come back in `error`.
PageEntry parse_page_line(std::string_view line);

/// Reads every non-blank line of a pages.jsonl stream.
std::vector<PageEntry> read_pages_jsonl(std::istream& in);

/// Serializes a page as a pages.jsonl line (HTML bodies are base64 encoded).
std::string to_jsonl(const PageRecord& page);

/// Extracts the external, dated links of a page. Throws ParseError for an
/// unparseable page URL.
std::vector<LinkRecord> page_links(const PageRecord& page, IngestReport& report,
                                   DomainMode mode = DomainMode::Registered);

/// Turns a page stream into LinkRecords. Output order follows input order (page by
/// page, anchor by anchor) regardless of the worker count.
IngestResult ingest_pages(const std::vector<PageEntry>& entries, const graph::LabelTable& labels,
                          const IngestOptions& options = {});

/// links.csv: source_domain,target_domain,source_url,target_url,pub_date
void write_links_csv(std::ostream& out, const std::vector<LinkRecord>& links);
std::vector<LinkRecord> read_links_csv(std::istream& in);

std::string base64_encode(std::string_view bytes);
/// Throws ParseError on characters outside the base64 alphabet.
std::string base64_decode(std::string_view text);

}  // namespace webeco::ingest
