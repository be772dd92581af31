#pragma once

// Tidy result rows and their CSV/JSON emitters.  Complex values expand into
// _re/_im column pairs at row-build time so both formats share one flat
// schema.  The pass flag is never stored; it is recomputed from the row's gap
// and tolerance at serialization time.  Output is byte-deterministic: doubles
// print through "%.17g" in CSV and shortest-round-trip in JSON, rows keep
// their build order, and files end with LF line endings only.

#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cqft::cli {

using Cell = std::variant<bool, long long, double, std::string>;

struct ResultRow {
    std::vector<std::pair<std::string, Cell>> cells;
    double gap = 0.0;
    double tolerance = 0.0;

    bool passes() const { return gap <= tolerance; }

    // exact-match overloads: a double must never narrow into the integer cell
    ResultRow& add(const std::string& name, double value) {
        cells.emplace_back(name, Cell(value));
        return *this;
    }
    ResultRow& add(const std::string& name, long long value) {
        cells.emplace_back(name, Cell(value));
        return *this;
    }
    ResultRow& add(const std::string& name, int value) {
        return add(name, static_cast<long long>(value));
    }
    ResultRow& add(const std::string& name, bool value) {
        cells.emplace_back(name, Cell(value));
        return *this;
    }
    ResultRow& add(const std::string& name, std::string value) {
        cells.emplace_back(name, Cell(std::move(value)));
        return *this;
    }
    ResultRow& add(const std::string& name, const char* value) {
        return add(name, std::string(value));
    }
    ResultRow& add(const std::string& name, std::complex<double> value) {
        cells.emplace_back(name + "_re", Cell(value.real()));
        cells.emplace_back(name + "_im", Cell(value.imag()));
        return *this;
    }
};

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv|json)");
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail_rows {

inline void check_uniform_schema(const std::vector<ResultRow>& rows) {
    for (const ResultRow& row : rows) {
        if (row.cells.size() != rows.front().cells.size())
            throw std::logic_error("result rows have diverging schemas");
        for (std::size_t i = 0; i < row.cells.size(); ++i)
            if (row.cells[i].first != rows.front().cells[i].first)
                throw std::logic_error("result rows have diverging schemas");
    }
}

inline std::string cell_to_csv(const Cell& cell) {
    struct Visitor {
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& v) const {
            if (v.find_first_of(",\n\"") != std::string::npos)
                throw std::invalid_argument("string cell needs no quoting by contract: " + v);
            return v;
        }
    };
    return std::visit(Visitor{}, cell);
}

}  // namespace detail_rows

// header + one line per row; complex columns already flattened
inline std::string to_csv(const std::vector<ResultRow>& rows,
                          const std::vector<std::string>& emptyHeader = {}) {
    std::string out;
    if (rows.empty()) {
        for (const std::string& name : emptyHeader) out += name + ',';
        out += "gap,tolerance,pass\n";
        return out;
    }
    detail_rows::check_uniform_schema(rows);
    for (std::size_t i = 0; i < rows.front().cells.size(); ++i) {
        if (i) out += ',';
        out += rows.front().cells[i].first;
    }
    out += ",gap,tolerance,pass\n";
    for (const ResultRow& row : rows) {
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            if (i) out += ',';
            out += detail_rows::cell_to_csv(row.cells[i].second);
        }
        out += ',';
        out += format_double(row.gap);
        out += ',';
        out += format_double(row.tolerance);
        out += ',';
        out += row.passes() ? "true" : "false";
        out += '\n';
    }
    return out;
}

inline std::string to_json(const std::vector<ResultRow>& rows) {
    detail_rows::check_uniform_schema(rows);
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const ResultRow& row : rows) {
        nlohmann::ordered_json obj;
        for (const auto& [name, cell] : row.cells) {
            std::visit([&](const auto& v) { obj[name] = v; }, cell);
        }
        obj["gap"] = row.gap;
        obj["tolerance"] = row.tolerance;
        obj["pass"] = row.passes();
        array.push_back(std::move(obj));
    }
    return array.dump(2) + "\n";
}

// inverse of to_json, for round-trip checks and downstream consumers
inline std::vector<ResultRow> rows_from_json(const std::string& text) {
    const nlohmann::ordered_json array = nlohmann::ordered_json::parse(text);
    if (!array.is_array()) throw std::invalid_argument("rows_from_json: expected a JSON array");
    std::vector<ResultRow> rows;
    for (const auto& obj : array) {
        ResultRow row;
        for (const auto& [name, value] : obj.items()) {
            if (name == "gap") {
                row.gap = value.get<double>();
            } else if (name == "tolerance") {
                row.tolerance = value.get<double>();
            } else if (name == "pass") {
                // recomputed from gap/tolerance; parsed only for validation
                if (value.get<bool>() != (row.gap <= row.tolerance))
                    throw std::invalid_argument("rows_from_json: pass flag inconsistent");
            } else if (value.is_boolean()) {
                row.add(name, value.get<bool>());
            } else if (value.is_number_integer()) {
                row.add(name, value.get<long long>());
            } else if (value.is_number_float()) {
                row.add(name, value.get<double>());
            } else if (value.is_string()) {
                row.add(name, value.get<std::string>());
            } else {
                throw std::invalid_argument("rows_from_json: unsupported cell type");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline void emit(const std::vector<ResultRow>& rows, OutputFormat format,
                 const std::string& path) {
    write_text_file(path, format == OutputFormat::csv ? to_csv(rows) : to_json(rows));
}

}  // namespace cqft::cli
