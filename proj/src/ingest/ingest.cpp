#include "webeco/ingest/ingest.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "webeco/csv.hpp"
#include "webeco/error.hpp"
#include "webeco/ingest/html.hpp"
#include "webeco/ingest/url.hpp"
#include "webeco/parallel.hpp"

namespace webeco::ingest {

namespace {

std::optional<Date> checked_pub_date(std::optional<Date> d, const Timestamp& fetch_time) {
    if (!d || *d < earliest_web_date() || *d > fetch_time.date()) return std::nullopt;
    return d;
}

void accumulate(IngestReport& into, const IngestReport& part) {
    into.pages += part.pages;
    into.links += part.links;
    into.dateless_pages += part.dateless_pages;
    into.dropped_internal += part.dropped_internal;
    into.dropped_scheme += part.dropped_scheme;
    into.unresolvable += part.unresolvable;
    into.unreadable_pages += part.unreadable_pages;
    into.corrupt_entries += part.corrupt_entries;
    into.unlabeled_sources += part.unlabeled_sources;
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(bytes.data()),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string base64_decode(std::string_view text) {
    std::string clean;
    clean.reserve(text.size());
    for (char c : text) {
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        clean.push_back(c);
    }
    if (clean.empty()) return {};
    // EVP_DecodeBlock requires a multiple of four characters.
    while (clean.size() % 4 != 0) clean.push_back('=');
    std::string out(3 * clean.size() / 4, '\0');
    const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(clean.data()),
                                  static_cast<int>(clean.size()));
    if (n < 0) throw ParseError("invalid base64 payload");
    std::size_t padding = 0;
    for (auto it = clean.rbegin(); it != clean.rend() && *it == '='; ++it) ++padding;
    out.resize(static_cast<std::size_t>(n) - std::min<std::size_t>(padding, 2));
    return out;
}

PageEntry parse_page_line(std::string_view line) {
    PageEntry entry;
    const auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        entry.error = "not a JSON object";
        return entry;
    }
    try {
        PageRecord page;
        if (!doc.contains("url") || !doc["url"].is_string()) throw ParseError("missing url");
        page.url = doc["url"].get<std::string>();
        if (!Url::try_parse(page.url)) throw ParseError("url is not absolute http(s): " + page.url);
        if (!doc.contains("fetch_time") || !doc["fetch_time"].is_string()) throw ParseError("missing fetch_time");
        page.fetch_time = Timestamp::parse_rfc3339(doc["fetch_time"].get<std::string>());
        if (doc.contains("html_b64")) {
            if (!doc["html_b64"].is_string()) throw ParseError("html_b64 is not a string");
            page.body = base64_decode(doc["html_b64"].get<std::string>());
        } else if (doc.contains("links")) {
            if (!doc["links"].is_array()) throw ParseError("links is not an array");
            page.pre_extracted = true;
            for (const auto& link : doc["links"]) {
                if (!link.is_string()) throw ParseError("non-string entry in links");
                page.out_links.push_back(link.get<std::string>());
            }
            if (doc.contains("pub_date") && doc["pub_date"].is_string()) {
                const auto text = doc["pub_date"].get<std::string>();
                if (!text.empty()) page.publication_date = Date::parse(text);
            }
        } else {
            throw ParseError("entry has neither html_b64 nor links");
        }
        entry.page = std::move(page);
    } catch (const Error& e) {
        entry.error = e.what();
    }
    return entry;
}

std::vector<PageEntry> read_pages_jsonl(std::istream& in) {
    std::vector<PageEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        entries.push_back(parse_page_line(line));
    }
    return entries;
}

std::string to_jsonl(const PageRecord& page) {
    nlohmann::ordered_json doc;
    doc["url"] = page.url;
    doc["fetch_time"] = page.fetch_time.to_string();
    if (page.pre_extracted) {
        doc["links"] = page.out_links;
        doc["pub_date"] = page.publication_date ? page.publication_date->to_string() : "";
    } else {
        doc["html_b64"] = base64_encode(page.body);
    }
    return doc.dump();
}

std::vector<LinkRecord> page_links(const PageRecord& page, IngestReport& report, DomainMode mode) {
    const Url source = Url::parse(page.url);
    const std::string source_url = source.to_string();
    const std::string source_domain = canonical_host(source.host, mode);

    std::vector<std::string> targets;
    std::optional<Date> pub_date;
    if (page.pre_extracted) {
        for (const auto& link : page.out_links) {
            if (auto resolved = source.resolve(link)) {
                targets.push_back(resolved->to_string());
            } else {
                ++report.unresolvable;
            }
        }
        pub_date = checked_pub_date(page.publication_date, page.fetch_time);
    } else {
        auto extraction = extract_links(page.body, source);
        if (extraction.unreadable) ++report.unreadable_pages;
        report.dropped_scheme += extraction.dropped_scheme;
        report.unresolvable += extraction.unresolvable;
        targets = std::move(extraction.links);
        pub_date = extract_publication_date(page.body, source, page.fetch_time.date());
    }
    ++report.pages;
    if (!pub_date) ++report.dateless_pages;

    std::vector<LinkRecord> records;
    records.reserve(targets.size());
    for (auto& target : targets) {
        const auto target_url = Url::try_parse(target);
        if (!target_url) {
            ++report.unresolvable;
            continue;
        }
        std::string target_domain = canonical_host(target_url->host, mode);
        if (target_domain == source_domain) {
            ++report.dropped_internal;
            continue;
        }
        records.push_back(LinkRecord{source_url, source_domain, std::move(target), std::move(target_domain),
                                     pub_date});
    }
    report.links += records.size();
    return records;
}

IngestResult ingest_pages(const std::vector<PageEntry>& entries, const graph::LabelTable& labels,
                          const IngestOptions& options) {
    std::vector<std::vector<LinkRecord>> per_page(entries.size());
    std::vector<IngestReport> reports(entries.size());
    parallel_for(entries.size(), options.jobs, [&](std::size_t i) {
        const auto& entry = entries[i];
        if (!entry.page) {
            reports[i].corrupt_entries = 1;
            return;
        }
        try {
            IngestReport local;
            per_page[i] = page_links(*entry.page, local, options.domain_mode);
            const std::string source_domain =
                canonical_host(Url::parse(entry.page->url).host, options.domain_mode);
            if (!labels.contains(source_domain)) local.unlabeled_sources = 1;
            reports[i] = local;
        } catch (const Error&) {
            per_page[i].clear();
            reports[i] = IngestReport{};
            reports[i].corrupt_entries = 1;
        }
    });
    IngestResult result;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        accumulate(result.report, reports[i]);
        for (auto& record : per_page[i]) result.links.push_back(std::move(record));
    }
    return result;
}

void write_links_csv(std::ostream& out, const std::vector<LinkRecord>& links) {
    csv::write_record(out, {"source_domain", "target_domain", "source_url", "target_url", "pub_date"});
    for (const auto& l : links) {
        csv::write_record(out, {l.source_domain, l.target_domain, l.source_url, l.target_url,
                                l.publication_date ? l.publication_date->to_string() : ""});
    }
}

std::vector<LinkRecord> read_links_csv(std::istream& in) {
    std::vector<LinkRecord> links;
    csv::read(in, {"source_domain", "target_domain", "source_url", "target_url", "pub_date"},
              [&](const std::vector<std::string>& row, std::size_t line) {
                  LinkRecord r;
                  r.source_domain = row[0];
                  r.target_domain = row[1];
                  r.source_url = row[2];
                  r.target_url = row[3];
                  if (!row[4].empty()) {
                      r.publication_date = Date::try_parse(row[4]);
                      if (!r.publication_date) {
                          throw ParseError("links.csv line " + std::to_string(line) + ": bad pub_date '" +
                                           row[4] + "'");
                      }
                  }
                  if (r.source_domain.empty() || r.target_domain.empty()) {
                      throw ParseError("links.csv line " + std::to_string(line) + ": empty domain");
                  }
                  links.push_back(std::move(r));
              });
    return links;
}

}  // namespace webeco::ingest
