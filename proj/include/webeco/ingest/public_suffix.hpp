#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

namespace webeco::ingest {

/// Public-suffix rule set (publicsuffix.org format: plain, "*." wildcard and "!"
/// exception rules; ICANN and private sections both apply).
class PublicSuffixList {
public:
    /// Parses the text of a public_suffix_list.dat file.
    static PublicSuffixList parse(std::string_view list_text);

    /// Snapshot compiled into the library (see data/public_suffix_list.dat).
    static const PublicSuffixList& bundled();
    static std::string_view bundled_version();

    /// Longest matching public suffix of a lowercase host (default rule "*").
    std::string public_suffix(std::string_view host) const;

    /// Public suffix plus one label. A host that is itself a public suffix is
    /// returned unchanged.
    std::string registrable_domain(std::string_view host) const;

    std::size_t rule_count() const { return rules_.size() + wildcards_.size() + exceptions_.size(); }

private:
    std::unordered_set<std::string> rules_;
    std::unordered_set<std::string> wildcards_;   // stored without the "*." prefix
    std::unordered_set<std::string> exceptions_;  // stored without the "!" prefix
};

enum class DomainMode {
    Registered,  // registrable domain (default node granularity)
    MultiLabel,  // full host, only a leading "www." removed
};

/// Canonical node name for a URL. Throws ParseError on unparseable URLs; IP hosts are
/// returned verbatim.
std::string canonical_domain(std::string_view url, DomainMode mode = DomainMode::Registered,
                             const PublicSuffixList& list = PublicSuffixList::bundled());

/// Same as canonical_domain but starting from an already parsed host.
std::string canonical_host(std::string_view host, DomainMode mode = DomainMode::Registered,
                           const PublicSuffixList& list = PublicSuffixList::bundled());

}  // namespace webeco::ingest
