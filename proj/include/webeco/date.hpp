#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace webeco {

/// Proleptic Gregorian calendar date with day resolution.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

    /// Throws ArgumentError if the fields do not name a valid calendar day.
    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Strict "YYYY-MM-DD". Throws ParseError.
    static Date parse(std::string_view text);

    /// Lenient variant: nullopt on malformed or invalid dates.
    static std::optional<Date> try_parse(std::string_view text);

    static constexpr Date from_serial(std::int64_t days_since_epoch) {
        return Date(std::chrono::sys_days(std::chrono::days(days_since_epoch)));
    }

    constexpr std::int64_t serial() const { return days_.time_since_epoch().count(); }
    constexpr std::chrono::sys_days sys_days() const { return days_; }

    std::chrono::year_month_day ymd() const { return std::chrono::year_month_day(days_); }
    int year() const { return static_cast<int>(ymd().year()); }
    unsigned month() const { return static_cast<unsigned>(ymd().month()); }
    unsigned day() const { return static_cast<unsigned>(ymd().day()); }

    constexpr Date plus_days(std::int64_t n) const { return from_serial(serial() + n); }

    std::string to_string() const;

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

/// Seconds-resolution UTC instant, parsed from RFC 3339.
struct Timestamp {
    std::int64_t unix_seconds = 0;

    /// Accepts "YYYY-MM-DDTHH:MM:SS[.frac](Z|±HH:MM)" and bare "YYYY-MM-DD".
    static Timestamp parse_rfc3339(std::string_view text);
    static std::optional<Timestamp> try_parse_rfc3339(std::string_view text);

    Date date() const;
    std::string to_string() const;

    auto operator<=>(const Timestamp&) const = default;
};

/// Earliest publication date accepted anywhere in the pipeline.
inline Date earliest_web_date() { return Date::from_ymd(1995, 1, 1); }

}  // namespace webeco
