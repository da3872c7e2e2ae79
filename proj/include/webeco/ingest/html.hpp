#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webeco/date.hpp"
#include "webeco/ingest/url.hpp"

namespace webeco::ingest {

struct LinkExtraction {
    std::vector<std::string> links;  // absolute, fragment-free, document order
    std::size_t dropped_scheme = 0;  // javascript:, mailto:, data:, ...
    std::size_t unresolvable = 0;    // malformed hrefs
    bool unreadable = false;         // body looked binary; links is empty
};

/// Every <a href> resolved against the first <base href> (if any) and then
/// `base_url`. Malformed markup is tolerated.
LinkExtraction extract_links(std::string_view body, const Url& base_url);

/// Publication date heuristic: meta tags and JSON-LD datePublished, then
/// <time datetime>, then a /YYYY/MM/DD/ or /YYYY-MM-DD/ URL path segment. Within one
/// level the earliest valid candidate wins. Only dates in [1995-01-01, fetch_date]
/// are considered valid.
std::optional<Date> extract_publication_date(std::string_view body, const Url& url, Date fetch_date);

/// Tag-stripped, entity-decoded text with script/style content removed and
/// whitespace runs collapsed to one space.
std::string visible_text(std::string_view body);

/// Decodes the common named entities and numeric character references.
std::string decode_entities(std::string_view text);

}  // namespace webeco::ingest
