#include "webeco/ingest/url.hpp"

#include <algorithm>
#include <cctype>

#include "webeco/error.hpp"

namespace webeco::ingest {

namespace {

struct Reference {
    std::optional<std::string> scheme;
    std::optional<std::string> authority;
    std::string path;
    std::optional<std::string> query;
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Drops ASCII tab/newline anywhere and trims surrounding whitespace, as browsers do
// before parsing an href; backslashes count as path separators.
std::string clean_reference(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (c == '\t' || c == '\n' || c == '\r') continue;
        out.push_back(c == '\\' ? '/' : c);
    }
    const auto not_space = [](unsigned char c) { return c > 0x20; };
    auto first = std::find_if(out.begin(), out.end(), not_space);
    auto last = std::find_if(out.rbegin(), out.rend(), not_space).base();
    if (first >= last) return {};
    return std::string(first, last);
}

Reference split_reference(std::string_view s) {
    Reference ref;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);

    const auto scheme_end = s.find(':');
    if (scheme_end != std::string_view::npos && scheme_end > 0 &&
        std::isalpha(static_cast<unsigned char>(s[0]))) {
        const auto candidate = s.substr(0, scheme_end);
        const bool valid = std::all_of(candidate.begin(), candidate.end(), [](unsigned char c) {
            return std::isalnum(c) || c == '+' || c == '-' || c == '.';
        });
        if (valid) {
            ref.scheme = lower(candidate);
            s.remove_prefix(scheme_end + 1);
        }
    }
    if (s.starts_with("//")) {
        s.remove_prefix(2);
        const auto end = s.find_first_of("/?");
        ref.authority = std::string(s.substr(0, end));
        s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
    }
    const auto q = s.find('?');
    ref.path = std::string(s.substr(0, q));
    if (q != std::string_view::npos) ref.query = std::string(s.substr(q + 1));
    return ref;
}

bool parse_authority(std::string_view authority, const std::string& scheme, Url& url) {
    if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
    std::string_view host = authority;
    std::string_view port;
    if (authority.starts_with('[')) {
        const auto close = authority.find(']');
        if (close == std::string_view::npos) return false;
        host = authority.substr(0, close + 1);
        auto rest = authority.substr(close + 1);
        if (!rest.empty()) {
            if (rest[0] != ':') return false;
            port = rest.substr(1);
        }
    } else if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        host = authority.substr(0, colon);
        port = authority.substr(colon + 1);
    }
    while (!host.empty() && host.back() == '.') host.remove_suffix(1);
    if (host.empty()) return false;
    for (unsigned char c : host) {
        if (c <= 0x20 || c == '/' || c == '?' || c == '#' || c == '<' || c == '>' || c == '"' ||
            c == '%' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`' || c == '\\') {
            return false;
        }
    }
    url.host = lower(host);
    url.port.reset();
    if (!port.empty()) {
        if (port.size() > 5 || !std::all_of(port.begin(), port.end(),
                                            [](unsigned char c) { return std::isdigit(c); })) {
            return false;
        }
        const int value = std::stoi(std::string(port));
        if (value > 65535) return false;
        const int default_port = scheme == "https" ? 443 : 80;
        if (value != default_port) url.port = value;
    }
    return true;
}

std::string merge_paths(const Url& base, std::string_view ref_path) {
    const auto slash = base.path.rfind('/');
    if (slash == std::string::npos) return "/" + std::string(ref_path);
    return base.path.substr(0, slash + 1) + std::string(ref_path);
}

bool is_web_scheme(const std::string& scheme) { return scheme == "http" || scheme == "https"; }

}  // namespace

std::string remove_dot_segments(std::string_view path) {
    std::string input(path);
    std::string output;
    while (!input.empty()) {
        if (input.starts_with("../")) {
            input.erase(0, 3);
        } else if (input.starts_with("./")) {
            input.erase(0, 2);
        } else if (input.starts_with("/./")) {
            input.erase(0, 2);
        } else if (input == "/.") {
            input = "/";
        } else if (input.starts_with("/../") || input == "/..") {
            input = input.size() == 3 ? std::string("/") : input.substr(3);
            const auto last = output.rfind('/');
            output.erase(last == std::string::npos ? 0 : last);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            const auto next = input.find('/', input[0] == '/' ? 1 : 0);
            output += input.substr(0, next);
            input.erase(0, next == std::string::npos ? input.size() : next);
        }
    }
    return output;
}

std::optional<Url> Url::try_parse(std::string_view text) {
    const Reference ref = split_reference(clean_reference(text));
    if (!ref.scheme || !is_web_scheme(*ref.scheme) || !ref.authority) return std::nullopt;
    Url url;
    url.scheme = *ref.scheme;
    if (!parse_authority(*ref.authority, url.scheme, url)) return std::nullopt;
    url.path = ref.path.empty() ? "/" : remove_dot_segments(ref.path);
    if (url.path.empty() || url.path[0] != '/') url.path.insert(url.path.begin(), '/');
    url.query = ref.query;
    return url;
}

Url Url::parse(std::string_view text) {
    auto url = try_parse(text);
    if (!url) throw ParseError("not an absolute http(s) URL: '" + std::string(text) + "'");
    return *url;
}

std::optional<Url> Url::resolve(std::string_view reference) const {
    const std::string cleaned = clean_reference(reference);
    const Reference ref = split_reference(cleaned);
    Url target;
    if (ref.scheme) {
        if (!is_web_scheme(*ref.scheme)) return std::nullopt;
        if (!ref.authority) {
            // "http:path" relative form; only meaningful for the base's own scheme.
            if (*ref.scheme != scheme) return std::nullopt;
            return resolve(std::string_view(cleaned).substr(scheme.size() + 1));
        }
        return try_parse(cleaned);
    }
    target.scheme = scheme;
    if (ref.authority) {
        if (!parse_authority(*ref.authority, target.scheme, target)) return std::nullopt;
        target.path = remove_dot_segments(ref.path);
        target.query = ref.query;
    } else {
        target.host = host;
        target.port = port;
        if (ref.path.empty()) {
            target.path = path;
            target.query = ref.query ? ref.query : query;
        } else {
            target.path = ref.path.starts_with('/') ? remove_dot_segments(ref.path)
                                                    : remove_dot_segments(merge_paths(*this, ref.path));
            target.query = ref.query;
        }
    }
    if (target.path.empty() || target.path[0] != '/') target.path.insert(target.path.begin(), '/');
    return target;
}

bool Url::host_is_ip() const {
    if (host.starts_with('[')) return true;
    int dots = 0;
    for (char c : host) {
        if (c == '.') {
            ++dots;
        } else if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return dots == 3;
}

std::string Url::to_string() const {
    std::string out = scheme + "://" + host;
    if (port) out += ":" + std::to_string(*port);
    out += path;
    if (query) out += "?" + *query;
    return out;
}

}  // namespace webeco::ingest
