#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "refl/inference.hpp"
#include "refl/types.hpp"

namespace refl {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::string normalized = line;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream stream(normalized);
    std::vector<std::string> fields;
    std::string field;
    while (stream >> field) fields.push_back(field);
    return fields;
}

inline double parse_number(const std::string& text, std::size_t line, std::size_t column) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != text.size()) {
        std::ostringstream msg;
        msg << "non-numeric field '" << text << "' at line " << line << ", column " << column;
        throw ParseError(msg.str());
    }
    return value;
}

}  // namespace detail

/// Parses a reduced reflectivity text file: columns q, R, [dR], [extras
/// ignored]; '#' comments and blank lines skipped; whitespace or comma
/// delimited. Rows are re-sorted ascending in q.
inline ReflectivityCurve read_reflectivity_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ParseError("cannot open data file: " + path);

    struct Row {
        double q, r;
        bool has_dr;
        double dr;
    };
    std::vector<Row> rows;
    bool warned_extras = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() < 2) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected at least 2 columns (q R), got "
                << fields.size();
            throw ParseError(msg.str());
        }
        Row row{};
        row.q = detail::parse_number(fields[0], line_no, 1);
        row.r = detail::parse_number(fields[1], line_no, 2);
        row.has_dr = fields.size() >= 3;
        if (row.has_dr) row.dr = detail::parse_number(fields[2], line_no, 3);
        if (fields.size() >= 4 && !warned_extras) {
            std::cerr << "warning: " << path
                      << ": extra columns ignored (resolution smearing is not supported)\n";
            warned_extras = true;
        }
        if (!(row.q > 0.0)) {
            std::ostringstream msg;
            msg << "line " << line_no << ": q must be positive, got " << row.q;
            throw ParseError(msg.str());
        }
        if (row.has_dr && !(row.dr > 0.0)) {
            std::ostringstream msg;
            msg << "line " << line_no << ": dR must be positive, got " << row.dr;
            throw ParseError(msg.str());
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");

    const bool all_have_dr =
        std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.has_dr; });
    const bool any_have_dr =
        std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.has_dr; });
    if (any_have_dr && !all_have_dr)
        throw ParseError(path + ": uncertainty column present on some rows but not all");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.q < b.q; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].q == rows[i - 1].q) {
            std::ostringstream msg;
            msg << "duplicate q value " << rows[i].q;
            throw ParseError(msg.str());
        }

    ReflectivityCurve curve;
    for (const Row& row : rows) {
        curve.q.push_back(row.q);
        curve.r.push_back(row.r);
    }
    if (all_have_dr) {
        curve.dr = std::vector<double>();
        for (const Row& row : rows) curve.dr->push_back(row.dr);
    }
    return curve;
}

inline Dataset read_dataset_file(const std::string& path) {
    Dataset dataset;
    dataset.curve = read_reflectivity_file(path);
    if (!dataset.curve.dr)
        throw ParseError(path +
                         ": no uncertainty column; fitting requires q R dR data "
                         "(supply a third column)");
    return dataset;
}

/// Writes content to path atomically (temp file then rename).
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open output file: " + tmp);
        file << content;
        if (!file) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

/// Column file: q, then one column per curve.
inline std::string curve_table(const std::vector<double>& q,
                               const std::vector<std::string>& headers,
                               const std::vector<const std::vector<double>*>& columns) {
    std::ostringstream out;
    out << "# q";
    for (const auto& h : headers) out << " " << h;
    out << "\n";
    for (std::size_t i = 0; i < q.size(); ++i) {
        out << format_number(q[i]);
        for (const auto* col : columns) out << " " << format_number((*col)[i]);
        out << "\n";
    }
    return out.str();
}

}  // namespace refl
