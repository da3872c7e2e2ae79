#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace webeco::ingest {

/// An absolute http(s) URL with the fragment removed. Scheme and host are lowercased,
/// default ports dropped, and dot segments removed from the path.
struct Url {
    std::string scheme;  // "http" or "https"
    std::string host;    // lowercase, brackets kept for IPv6 literals
    std::optional<int> port;
    std::string path = "/";
    std::optional<std::string> query;

    /// Throws ParseError unless `text` is an absolute http/https URL with a host.
    static Url parse(std::string_view text);
    static std::optional<Url> try_parse(std::string_view text);

    /// RFC 3986 reference resolution. Returns nullopt when the result is not http(s)
    /// or the reference is malformed.
    std::optional<Url> resolve(std::string_view reference) const;

    bool host_is_ip() const;

    std::string to_string() const;

    bool operator==(const Url&) const = default;
};

/// Removes "." and ".." segments per RFC 3986 section 5.2.4.
std::string remove_dot_segments(std::string_view path);

}  // namespace webeco::ingest
