#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "webeco/date.hpp"

namespace webeco::stats {

/// Date-indexed real series. Invariants: dates strictly increasing, values finite,
/// equal lengths.
class TimeSeries {
public:
    TimeSeries() = default;
    /// Throws ArgumentError when an invariant is violated.
    TimeSeries(std::vector<Date> dates, std::vector<double> values);

    /// Consecutive days starting at `start`.
    static TimeSeries daily(Date start, std::vector<double> values);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    /// Points with dates in [from, to].
    TimeSeries slice(Date from, Date to) const;

    bool operator==(const TimeSeries&) const = default;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Series CSV: "date,value".
void write_series_csv(std::ostream& out, const TimeSeries& ts);
TimeSeries read_series_csv(std::istream& in);

/// y_t = x_t - x_{t-1}, applied `order` times; each result keeps the later date.
/// Throws ArgumentError if order == 0 or size() <= order.
TimeSeries difference(const TimeSeries& ts, std::size_t order = 1);
std::vector<double> difference(std::span<const double> values, std::size_t order = 1);

/// Trailing moving average over a calendar window of `window_days` days ending at
/// each date (the first points average whatever history exists).
TimeSeries trailing_moving_average(const TimeSeries& ts, std::size_t window_days);

}  // namespace webeco::stats
