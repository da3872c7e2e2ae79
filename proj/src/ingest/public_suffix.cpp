#include "webeco/ingest/public_suffix.hpp"

#include <vector>

#include "webeco/ingest/url.hpp"

namespace webeco::ingest {

// Generated at configure time from data/public_suffix_list.dat.
extern const char* const kBundledSuffixList;
extern const char* const kBundledSuffixListVersion;

namespace {

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (start <= host.size()) {
        const auto dot = host.find('.', start);
        if (dot == std::string_view::npos) {
            labels.push_back(host.substr(start));
            break;
        }
        labels.push_back(host.substr(start, dot - start));
        start = dot + 1;
    }
    return labels;
}

// Joins labels[from..] with dots.
std::string join_from(const std::vector<std::string_view>& labels, std::size_t from) {
    std::string out;
    for (std::size_t i = from; i < labels.size(); ++i) {
        if (!out.empty()) out.push_back('.');
        out.append(labels[i]);
    }
    return out;
}

bool is_ip_literal(std::string_view host) {
    Url probe;
    probe.host = std::string(host);
    return probe.host_is_ip();
}

}  // namespace

PublicSuffixList PublicSuffixList::parse(std::string_view text) {
    PublicSuffixList list;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        // A rule is the first whitespace-delimited token on the line.
        const auto ws = line.find_first_of(" \t\r");
        if (ws != std::string_view::npos) line = line.substr(0, ws);
        if (line.empty() || line.starts_with("//")) continue;
        if (line.starts_with('!')) {
            list.exceptions_.emplace(line.substr(1));
        } else if (line.starts_with("*.")) {
            list.wildcards_.emplace(line.substr(2));
        } else {
            list.rules_.emplace(line);
        }
    }
    return list;
}

const PublicSuffixList& PublicSuffixList::bundled() {
    static const PublicSuffixList list = parse(kBundledSuffixList);
    return list;
}

std::string_view PublicSuffixList::bundled_version() { return kBundledSuffixListVersion; }

std::string PublicSuffixList::public_suffix(std::string_view host) const {
    const auto labels = split_labels(host);
    // Scan from the longest candidate; the first (longest) hit wins, exceptions first.
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::string candidate = join_from(labels, i);
        if (exceptions_.contains(candidate)) return join_from(labels, i + 1);
        if (rules_.contains(candidate)) return candidate;
        if (i + 1 < labels.size() && wildcards_.contains(join_from(labels, i + 1))) return candidate;
    }
    return std::string(labels.back());
}

std::string PublicSuffixList::registrable_domain(std::string_view host) const {
    const std::string suffix = public_suffix(host);
    if (suffix.size() >= host.size()) return std::string(host);
    const std::string_view head = host.substr(0, host.size() - suffix.size() - 1);
    const auto dot = head.rfind('.');
    const std::string_view label = dot == std::string_view::npos ? head : head.substr(dot + 1);
    return std::string(label) + "." + suffix;
}

std::string canonical_host(std::string_view host, DomainMode mode, const PublicSuffixList& list) {
    std::string h(host);
    while (!h.empty() && h.back() == '.') h.pop_back();
    for (auto& c : h) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (is_ip_literal(h)) return h;
    std::string out = mode == DomainMode::Registered ? list.registrable_domain(h) : h;
    if (out.starts_with("www.") && out.size() > 4) out.erase(0, 4);
    return out;
}

std::string canonical_domain(std::string_view url, DomainMode mode, const PublicSuffixList& list) {
    const Url parsed = Url::parse(url);
    return canonical_host(parsed.host, mode, list);
}

}  // namespace webeco::ingest
