// Copyright 2026 The su4sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <limits>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "su4/errors.hpp"

namespace su4 {

/// A rectangular table of doubles with named columns. Column names carry
/// units in brackets; complex quantities appear as paired _re/_im columns.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> r) {
        if (r.size() != columns.size())
            throw ShapeError("row width " + std::to_string(r.size()) + " != column count " +
                             std::to_string(columns.size()));
        rows.push_back(std::move(r));
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline void write_csv(const ResultTable& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    for (size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << detail::csv_quote(t.columns[c]);
    out << "\n";
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << detail::format_double(row[c]);
        out << "\n";
    }
}

inline void write_json(const ResultTable& t, const std::string& path) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = row[c];
        arr.push_back(obj);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << arr.dump(2) << "\n";
}

/// Parse a CSV produced by write_csv (RFC-4180-style quoting).
inline ResultTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    auto parse_line = [](const std::string& line) {
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        fields.push_back(cur);
        return fields;
    };

    ResultTable t;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty result file '" + path + "'");
    t.columns = parse_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& f : parse_line(line)) row.push_back(std::stod(f));
        t.add_row(std::move(row));
    }
    return t;
}

inline ResultTable read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    nlohmann::ordered_json arr;
    in >> arr;
    ResultTable t;
    for (const auto& obj : arr) {
        if (t.columns.empty())
            for (auto it = obj.begin(); it != obj.end(); ++it) t.columns.push_back(it.key());
        std::vector<double> row;
        for (const auto& col : t.columns) {
            const auto& v = obj.at(col);
            // NaN serializes as null
            row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                      : v.get<double>());
        }
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace su4
