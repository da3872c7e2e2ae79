#include "webeco/date.hpp"

#include <cctype>
#include <cstdio>

#include "webeco/error.hpp"

namespace webeco {

namespace {

std::optional<int> read_digits(std::string_view text, std::size_t pos, std::size_t count) {
    if (pos + count > text.size()) return std::nullopt;
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const char c = text[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        value = value * 10 + (c - '0');
    }
    return value;
}

std::optional<Date> make_date(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(std::chrono::sys_days(ymd));
}

std::optional<Date> parse_date_prefix(std::string_view text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    const auto y = read_digits(text, 0, 4);
    const auto m = read_digits(text, 5, 2);
    const auto d = read_digits(text, 8, 2);
    if (!y || !m || !d) return std::nullopt;
    return make_date(*y, *m, *d);
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    auto d = make_date(year, static_cast<int>(month), static_cast<int>(day));
    if (!d) {
        throw ArgumentError("invalid calendar date " + std::to_string(year) + "-" +
                            std::to_string(month) + "-" + std::to_string(day));
    }
    return *d;
}

std::optional<Date> Date::try_parse(std::string_view text) {
    if (text.size() != 10) return std::nullopt;
    return parse_date_prefix(text);
}

Date Date::parse(std::string_view text) {
    auto d = try_parse(text);
    if (!d) throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    return *d;
}

std::string Date::to_string() const {
    const auto v = ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()),
                  static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
    return buf;
}

std::optional<Timestamp> Timestamp::try_parse_rfc3339(std::string_view text) {
    const auto date = parse_date_prefix(text);
    if (!date) return std::nullopt;
    std::int64_t seconds = date->serial() * 86400;
    if (text.size() == 10) return Timestamp{seconds};
    const char sep = text[10];
    if (sep != 'T' && sep != 't' && sep != ' ') return std::nullopt;
    const auto hh = read_digits(text, 11, 2);
    const auto mi = read_digits(text, 14, 2);
    const auto ss = read_digits(text, 17, 2);
    if (!hh || !mi || !ss || text.size() < 19 || text[13] != ':' || text[16] != ':') return std::nullopt;
    if (*hh > 23 || *mi > 59 || *ss > 60) return std::nullopt;
    seconds += *hh * 3600 + *mi * 60 + *ss;
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos == text.size()) return Timestamp{seconds};
    const char zone = text[pos];
    if ((zone == 'Z' || zone == 'z') && pos + 1 == text.size()) return Timestamp{seconds};
    if ((zone == '+' || zone == '-') && pos + 6 == text.size() && text[pos + 3] == ':') {
        const auto oh = read_digits(text, pos + 1, 2);
        const auto om = read_digits(text, pos + 4, 2);
        if (!oh || !om) return std::nullopt;
        const std::int64_t offset = *oh * 3600 + *om * 60;
        seconds += (zone == '+') ? -offset : offset;
        return Timestamp{seconds};
    }
    return std::nullopt;
}

Timestamp Timestamp::parse_rfc3339(std::string_view text) {
    auto t = try_parse_rfc3339(text);
    if (!t) throw ParseError("invalid RFC 3339 timestamp '" + std::string(text) + "'");
    return *t;
}

Date Timestamp::date() const {
    std::int64_t days = unix_seconds / 86400;
    if (unix_seconds % 86400 < 0) --days;
    return Date::from_serial(days);
}

std::string Timestamp::to_string() const {
    const Date d = date();
    const std::int64_t rem = unix_seconds - d.serial() * 86400;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", d.to_string().c_str(),
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace webeco
