#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace webeco::csv {

/// Splits one RFC 4180 record. Quoted fields may contain commas and doubled quotes;
/// embedded newlines are not supported.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

/// Writes one record terminated by '\n'.
void write_record(std::ostream& out, const std::vector<std::string>& fields);

/// Reads a headed CSV stream. The header must start with `expected_header`
/// columns (extra trailing columns are allowed). Calls `row` with each record and
/// its 1-based line number. Blank lines are skipped.
void read(std::istream& in, const std::vector<std::string>& expected_header,
          const std::function<void(const std::vector<std::string>&, std::size_t)>& row);

/// Fixed-precision decimal rendering used by every CSV/JSON emitter so that
/// repeated runs are byte-identical.
std::string format_double(double value, int precision = 10);

}  // namespace webeco::csv
