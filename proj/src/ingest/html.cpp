#include "webeco/ingest/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <regex>
#include <utility>

#include <nlohmann/json.hpp>

namespace webeco::ingest {

namespace {

using Attributes = std::vector<std::pair<std::string, std::string>>;

struct TagEvent {
    std::string name;  // lowercase
    Attributes attributes;
};

struct Visitor {
    std::function<void(const TagEvent&)> start_tag;
    std::function<void(std::string_view)> text;
    // Content of <script>/<style>, with the enclosing start tag.
    std::function<void(const TagEvent&, std::string_view)> raw_text;
};

char lower_char(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower_char);
    return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from) {
    auto it = std::search(haystack.begin() + static_cast<std::ptrdiff_t>(std::min(from, haystack.size())),
                          haystack.end(), needle.begin(), needle.end(),
                          [](char a, char b) { return lower_char(a) == lower_char(b); });
    return it == haystack.end() ? std::string_view::npos
                                : static_cast<std::size_t>(it - haystack.begin());
}

// Parses attributes starting at `pos` (just past the tag name); returns the index one
// past the closing '>' (or body.size()).
std::size_t parse_attributes(std::string_view body, std::size_t pos, Attributes& attrs,
                             bool& self_closing) {
    self_closing = false;
    while (pos < body.size()) {
        while (pos < body.size() && is_space(body[pos])) ++pos;
        if (pos >= body.size()) break;
        if (body[pos] == '>') return pos + 1;
        if (body[pos] == '/') {
            self_closing = pos + 1 < body.size() && body[pos + 1] == '>';
            ++pos;
            continue;
        }
        const std::size_t name_start = pos;
        while (pos < body.size() && !is_space(body[pos]) && body[pos] != '=' && body[pos] != '>' &&
               !(body[pos] == '/' && pos + 1 < body.size() && body[pos + 1] == '>')) {
            ++pos;
        }
        std::string name = lower(body.substr(name_start, pos - name_start));
        while (pos < body.size() && is_space(body[pos])) ++pos;
        std::string value;
        if (pos < body.size() && body[pos] == '=') {
            ++pos;
            while (pos < body.size() && is_space(body[pos])) ++pos;
            if (pos < body.size() && (body[pos] == '"' || body[pos] == '\'')) {
                const char quote = body[pos++];
                const auto close = body.find(quote, pos);
                const auto end = close == std::string_view::npos ? body.size() : close;
                value = std::string(body.substr(pos, end - pos));
                pos = close == std::string_view::npos ? body.size() : close + 1;
            } else {
                const std::size_t value_start = pos;
                while (pos < body.size() && !is_space(body[pos]) && body[pos] != '>') ++pos;
                value = std::string(body.substr(value_start, pos - value_start));
            }
        }
        if (!name.empty()) attrs.emplace_back(std::move(name), decode_entities(value));
    }
    return body.size();
}

void scan(std::string_view body, const Visitor& visitor) {
    std::size_t pos = 0;
    while (pos < body.size()) {
        const auto lt = body.find('<', pos);
        if (lt == std::string_view::npos) {
            if (visitor.text) visitor.text(body.substr(pos));
            return;
        }
        if (lt > pos && visitor.text) visitor.text(body.substr(pos, lt - pos));
        pos = lt;
        const std::string_view rest = body.substr(pos);
        if (rest.starts_with("<!--")) {
            const auto close = body.find("-->", pos + 4);
            pos = close == std::string_view::npos ? body.size() : close + 3;
            continue;
        }
        if (rest.starts_with("<!") || rest.starts_with("<?")) {
            const auto close = body.find('>', pos);
            pos = close == std::string_view::npos ? body.size() : close + 1;
            continue;
        }
        if (rest.starts_with("</")) {
            const auto close = body.find('>', pos);
            pos = close == std::string_view::npos ? body.size() : close + 1;
            continue;
        }
        if (rest.size() < 2 || !std::isalpha(static_cast<unsigned char>(rest[1]))) {
            if (visitor.text) visitor.text(body.substr(pos, 1));
            ++pos;
            continue;
        }
        std::size_t name_end = pos + 1;
        while (name_end < body.size() &&
               (std::isalnum(static_cast<unsigned char>(body[name_end])) || body[name_end] == '-' ||
                body[name_end] == ':')) {
            ++name_end;
        }
        TagEvent tag;
        tag.name = lower(body.substr(pos + 1, name_end - pos - 1));
        bool self_closing = false;
        pos = parse_attributes(body, name_end, tag.attributes, self_closing);
        if (visitor.start_tag) visitor.start_tag(tag);
        if ((tag.name == "script" || tag.name == "style") && !self_closing) {
            const auto close = find_ci(body, "</" + tag.name, pos);
            const auto end = close == std::string_view::npos ? body.size() : close;
            if (visitor.raw_text) visitor.raw_text(tag, body.substr(pos, end - pos));
            if (close == std::string_view::npos) return;
            const auto gt = body.find('>', close);
            pos = gt == std::string_view::npos ? body.size() : gt + 1;
        }
    }
}

const std::string* attribute(const TagEvent& tag, std::string_view name) {
    for (const auto& [key, value] : tag.attributes) {
        if (key == name) return &value;
    }
    return nullptr;
}

void append_utf8(std::string& out, unsigned long cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool looks_binary(std::string_view body) { return body.find('\0') != std::string_view::npos; }

// Leading "YYYY-MM-DD" of an ISO-8601 date or date-time, taken as written.
std::optional<Date> iso_date_prefix(std::string_view value) {
    while (!value.empty() && is_space(value.front())) value.remove_prefix(1);
    if (value.size() < 10) return std::nullopt;
    if (value.size() > 10 && std::isdigit(static_cast<unsigned char>(value[10]))) return std::nullopt;
    return Date::try_parse(value.substr(0, 10));
}

void collect_json_dates(const nlohmann::json& node, std::vector<std::string>& out) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            if (it.key() == "datePublished" && it.value().is_string()) {
                out.push_back(it.value().get<std::string>());
            } else {
                collect_json_dates(it.value(), out);
            }
        }
    } else if (node.is_array()) {
        for (const auto& child : node) collect_json_dates(child, out);
    }
}

class DateCandidates {
public:
    DateCandidates(Date lo, Date hi) : lo_(lo), hi_(hi) {}

    void offer(std::optional<Date> d) {
        if (!d || *d < lo_ || *d > hi_) return;
        if (!best_ || *d < *best_) best_ = d;
    }
    const std::optional<Date>& best() const { return best_; }

private:
    Date lo_, hi_;
    std::optional<Date> best_;
};

constexpr std::array<std::string_view, 5> kPublishedMetaKeys = {
    "article:published_time", "og:published_time", "datepublished", "article:published",
    "og:article:published_time"};

}  // namespace

std::string decode_entities(std::string_view text) {
    if (text.find('&') == std::string_view::npos) return std::string(text);
    static const std::array<std::pair<std::string_view, std::string_view>, 7> named = {{
        {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", "\xC2\xA0"},
        {"#x2F", "/"},
    }};
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        const auto semi = text.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(text[i++]);
            continue;
        }
        const std::string_view entity = text.substr(i + 1, semi - i - 1);
        bool decoded = false;
        if (entity.size() > 1 && entity[0] == '#') {
            const bool hex = entity[1] == 'x' || entity[1] == 'X';
            const std::string digits(entity.substr(hex ? 2 : 1));
            if (!digits.empty() &&
                std::all_of(digits.begin(), digits.end(), [hex](unsigned char c) {
                    return hex ? std::isxdigit(c) != 0 : std::isdigit(c) != 0;
                })) {
                append_utf8(out, std::stoul(digits, nullptr, hex ? 16 : 10));
                decoded = true;
            }
        } else {
            for (const auto& [name, replacement] : named) {
                if (entity == name) {
                    out.append(replacement);
                    decoded = true;
                    break;
                }
            }
        }
        if (decoded) {
            i = semi + 1;
        } else {
            out.push_back(text[i++]);
        }
    }
    return out;
}

LinkExtraction extract_links(std::string_view body, const Url& base_url) {
    LinkExtraction result;
    if (looks_binary(body)) {
        result.unreadable = true;
        return result;
    }
    std::vector<std::string> hrefs;
    std::optional<std::string> base_href;
    Visitor visitor;
    visitor.start_tag = [&](const TagEvent& tag) {
        if (tag.name == "a") {
            if (const auto* href = attribute(tag, "href")) hrefs.push_back(*href);
        } else if (tag.name == "base" && !base_href) {
            if (const auto* href = attribute(tag, "href")) base_href = *href;
        }
    };
    scan(body, visitor);

    Url base = base_url;
    if (base_href) {
        if (auto resolved = base_url.resolve(*base_href)) base = *resolved;
    }
    for (const auto& href : hrefs) {
        std::string_view trimmed = href;
        while (!trimmed.empty() && is_space(trimmed.front())) trimmed.remove_prefix(1);
        if (trimmed.empty() || trimmed.front() == '#') {
            // Same-document fragment reference.
            continue;
        }
        const auto colon = trimmed.find(':');
        const auto slash = trimmed.find_first_of("/?#");
        if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash)) {
            const std::string scheme = lower(trimmed.substr(0, colon));
            if (scheme != "http" && scheme != "https") {
                ++result.dropped_scheme;
                continue;
            }
        }
        if (auto resolved = base.resolve(trimmed)) {
            result.links.push_back(resolved->to_string());
        } else {
            ++result.unresolvable;
        }
    }
    return result;
}

std::optional<Date> extract_publication_date(std::string_view body, const Url& url, Date fetch_date) {
    const Date lo = earliest_web_date();
    DateCandidates meta(lo, fetch_date);
    DateCandidates time_elements(lo, fetch_date);

    if (!looks_binary(body)) {
        Visitor visitor;
        visitor.start_tag = [&](const TagEvent& tag) {
            if (tag.name == "meta") {
                const std::string* content = attribute(tag, "content");
                if (!content) return;
                for (const char* key_attr : {"property", "name", "itemprop"}) {
                    const std::string* key = attribute(tag, key_attr);
                    if (!key) continue;
                    const std::string k = lower(*key);
                    if (std::find(kPublishedMetaKeys.begin(), kPublishedMetaKeys.end(), k) !=
                        kPublishedMetaKeys.end()) {
                        meta.offer(iso_date_prefix(*content));
                    }
                }
            } else if (tag.name == "time") {
                if (const auto* dt = attribute(tag, "datetime")) time_elements.offer(iso_date_prefix(*dt));
            }
        };
        visitor.raw_text = [&](const TagEvent& tag, std::string_view content) {
            if (tag.name != "script") return;
            const std::string* type = attribute(tag, "type");
            if (!type || lower(*type) != "application/ld+json") return;
            std::vector<std::string> found;
            auto doc = nlohmann::json::parse(content, nullptr, false);
            if (!doc.is_discarded()) {
                collect_json_dates(doc, found);
            } else {
                static const std::regex loose(R"re("datePublished"\s*:\s*"([^"]+)")re");
                const std::string text(content);
                for (std::sregex_iterator it(text.begin(), text.end(), loose), end; it != end; ++it) {
                    found.push_back((*it)[1].str());
                }
            }
            for (const auto& value : found) meta.offer(iso_date_prefix(value));
        };
        scan(body, visitor);
    }
    if (meta.best()) return meta.best();
    if (time_elements.best()) return time_elements.best();

    DateCandidates path_dates(lo, fetch_date);
    static const std::regex slashed(R"(/(\d{4})/(\d{1,2})/(\d{1,2})(?=/|$))");
    static const std::regex dashed(R"(/(\d{4})-(\d{2})-(\d{2})(?=/|$))");
    for (const auto* pattern : {&slashed, &dashed}) {
        for (std::sregex_iterator it(url.path.begin(), url.path.end(), *pattern), end; it != end; ++it) {
            const int y = std::stoi((*it)[1].str());
            const int m = std::stoi((*it)[2].str());
            const int d = std::stoi((*it)[3].str());
            if (m < 1 || m > 12 || d < 1 || d > 31) continue;
            const std::chrono::year_month_day ymd{std::chrono::year{y},
                                                  std::chrono::month{static_cast<unsigned>(m)},
                                                  std::chrono::day{static_cast<unsigned>(d)}};
            if (ymd.ok()) path_dates.offer(Date(std::chrono::sys_days(ymd)));
        }
    }
    return path_dates.best();
}

std::string visible_text(std::string_view body) {
    std::string out;
    if (looks_binary(body)) return out;
    bool pending_space = false;
    Visitor visitor;
    visitor.text = [&](std::string_view chunk) {
        for (char c : decode_entities(chunk)) {
            if (is_space(c)) {
                pending_space = !out.empty();
            } else {
                if (pending_space) out.push_back(' ');
                pending_space = false;
                out.push_back(c);
            }
        }
    };
    // Tags separate words ("<p>a</p><p>b</p>" reads as "a b").
    visitor.start_tag = [&](const TagEvent&) { pending_space = !out.empty(); };
    scan(body, visitor);
    return out;
}

}  // namespace webeco::ingest
