#include "webeco/stats/timeseries.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "webeco/csv.hpp"
#include "webeco/error.hpp"

namespace webeco::stats {

TimeSeries::TimeSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) throw ArgumentError("TimeSeries: dates and values differ in length");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw ArgumentError("TimeSeries: non-finite value at " + dates_[i].to_string());
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw ArgumentError("TimeSeries: dates not strictly increasing at " + dates_[i].to_string());
        }
    }
}

TimeSeries TimeSeries::daily(Date start, std::vector<double> values) {
    std::vector<Date> dates;
    dates.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dates.push_back(start.plus_days(static_cast<std::int64_t>(i)));
    return TimeSeries(std::move(dates), std::move(values));
}

TimeSeries TimeSeries::slice(Date from, Date to) const {
    std::vector<Date> d;
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) {
        if (dates_[i] < from || to < dates_[i]) continue;
        d.push_back(dates_[i]);
        v.push_back(values_[i]);
    }
    return TimeSeries(std::move(d), std::move(v));
}

void write_series_csv(std::ostream& out, const TimeSeries& ts) {
    csv::write_record(out, {"date", "value"});
    for (std::size_t i = 0; i < ts.size(); ++i) {
        csv::write_record(out, {ts.dates()[i].to_string(), csv::format_double(ts.values()[i])});
    }
}

TimeSeries read_series_csv(std::istream& in) {
    std::vector<Date> dates;
    std::vector<double> values;
    csv::read(in, {"date", "value"}, [&](const std::vector<std::string>& row, std::size_t line) {
        dates.push_back(Date::parse(row[0]));
        try {
            std::size_t used = 0;
            values.push_back(std::stod(row[1], &used));
            if (used != row[1].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError("series CSV line " + std::to_string(line) + ": bad value '" + row[1] + "'");
        }
    });
    try {
        return TimeSeries(std::move(dates), std::move(values));
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
}

std::vector<double> difference(std::span<const double> values, std::size_t order) {
    if (order == 0) throw ArgumentError("difference order must be at least 1");
    if (values.size() <= order) {
        throw ArgumentError("series of length " + std::to_string(values.size()) + " is too short for order " +
                            std::to_string(order) + " differencing");
    }
    std::vector<double> current(values.begin(), values.end());
    for (std::size_t k = 0; k < order; ++k) {
        std::vector<double> next(current.size() - 1);
        for (std::size_t i = 1; i < current.size(); ++i) next[i - 1] = current[i] - current[i - 1];
        current = std::move(next);
    }
    return current;
}

TimeSeries difference(const TimeSeries& ts, std::size_t order) {
    auto values = difference(std::span<const double>(ts.values()), order);
    std::vector<Date> dates(ts.dates().begin() + static_cast<std::ptrdiff_t>(order), ts.dates().end());
    return TimeSeries(std::move(dates), std::move(values));
}

TimeSeries trailing_moving_average(const TimeSeries& ts, std::size_t window_days) {
    if (window_days == 0) throw ArgumentError("moving-average window must be at least 1 day");
    std::vector<double> out(ts.size());
    std::size_t start = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::int64_t earliest = ts.dates()[i].serial() - static_cast<std::int64_t>(window_days) + 1;
        while (ts.dates()[start].serial() < earliest) ++start;
        // Fresh sum per point: window 1 must reproduce the input exactly.
        double sum = 0.0;
        for (std::size_t j = start; j <= i; ++j) sum += ts.values()[j];
        out[i] = sum / static_cast<double>(i - start + 1);
    }
    return TimeSeries(ts.dates(), std::move(out));
}

}  // namespace webeco::stats
