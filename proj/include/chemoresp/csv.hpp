#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chemoresp/errors.hpp"

namespace chemoresp {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a required column; SchemaError when absent.
    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw SchemaError("missing required column '" + name + "'");
    }
};

namespace detail {
// One record, RFC-4180 quoting; returns false at end of input.
inline bool csv_next_record(std::istream& in, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c == '\r') {
            // swallow; newline handling below
        } else if (c == '\n') {
            out.push_back(field);
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
    if (!any) return false;
    out.push_back(field);
    return true;
}
} // namespace detail

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    CsvTable t;
    if (!detail::csv_next_record(in, t.header))
        throw SchemaError("'" + path + "' is empty");
    std::vector<std::string> row;
    while (detail::csv_next_record(in, row)) {
        if (row.size() == 1 && row[0].empty()) continue; // trailing blank line
        if (row.size() != t.header.size())
            throw ParseError("'" + path + "' row " + std::to_string(t.rows.size() + 1) +
                             ": expected " + std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(row.size()));
        t.rows.push_back(row);
    }
    return t;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q.push_back(c);
    }
    q += "\"";
    return q;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    auto emit = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            out << csv_quote(r[i]);
        }
        out << '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    if (!out) throw IoError("write failed for '" + path + "'");
}

// Shortest representation that round-trips a double exactly.
inline std::string format_double(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

inline long parse_long(const std::string& s, const std::string& context) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(context + ": '" + s + "' is not an integer");
    }
    if (pos != s.size()) throw ParseError(context + ": '" + s + "' is not an integer");
    return v;
}

inline double parse_double(const std::string& s, const std::string& context) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(context + ": '" + s + "' is not a number");
    }
    if (pos != s.size()) throw ParseError(context + ": '" + s + "' is not a number");
    return v;
}

} // namespace chemoresp
