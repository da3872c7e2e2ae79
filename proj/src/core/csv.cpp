#include "webeco/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "webeco/error.hpp"

namespace webeco::csv {

std::vector<std::string> split_record(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field");
    fields.push_back(std::move(current));
    return fields;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

void read(std::istream& in, const std::vector<std::string>& expected_header,
          const std::function<void(const std::vector<std::string>&, std::size_t)>& row) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_record(line);
        if (!header_seen) {
            if (line_no == 1 && !fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) {
                fields[0].erase(0, 3);
            }
            if (fields.size() < expected_header.size()) {
                throw ParseError("CSV header has too few columns at line " + std::to_string(line_no));
            }
            for (std::size_t i = 0; i < expected_header.size(); ++i) {
                if (fields[i] != expected_header[i]) {
                    throw ParseError("CSV header column " + std::to_string(i + 1) + " is '" +
                                     fields[i] + "', expected '" + expected_header[i] + "'");
                }
            }
            header_seen = true;
            continue;
        }
        if (fields.size() < expected_header.size()) {
            throw ParseError("CSV line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(expected_header.size()));
        }
        row(fields, line_no);
    }
    if (!header_seen) throw ParseError("CSV input is empty (missing header)");
}

std::string format_double(double value, int precision) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // normalizes -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision + 1, value);
    return buf;
}

}  // namespace webeco::csv
