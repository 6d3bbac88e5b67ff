#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "qnkit/cli/result.hpp"
#include "qnkit/error.hpp"

namespace qnkit::cli {

enum class Format { table, csv, json };

inline Format parse_format(const std::string& s)
{
    if (s == "table")
        return Format::table;
    if (s == "csv")
        return Format::csv;
    if (s == "json")
        return Format::json;
    fail(errc::invalid_parameter, "unknown format \"" + s + "\" (expected table, csv or json)");
}

namespace detail {

inline std::string number(double v, int digits)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

inline void csv_line(std::string& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out += ',';
        out += csv_field(fields[i]);
    }
    out += '\n';
}

inline std::string render_csv(const ResultDocument& r)
{
    constexpr int digits = 17;
    std::string out;
    if (r.command == "sweep") {
        std::vector<std::string> header = r.parameters;
        header.push_back("status");
        header.insert(header.end(), r.metrics.begin(), r.metrics.end());
        csv_line(out, header);
        for (const auto& row : r.rows) {
            std::vector<std::string> f;
            for (double c : row.coordinates)
                f.push_back(number(c, digits));
            f.push_back(row.status);
            for (double v : row.values)
                f.push_back(number(v, digits));
            csv_line(out, f);
        }
        return out;
    }
    std::vector<std::string> header{"metric", "row"};
    header.insert(header.end(), r.columns.begin(), r.columns.end());
    header.push_back("total");
    csv_line(out, header);
    for (const auto& t : r.tables)
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            std::vector<std::string> f{t.name, t.rows[i]};
            for (double v : t.values[i])
                f.push_back(number(v, digits));
            f.resize(2 + r.columns.size());
            f.push_back(t.totals[i] ? number(*t.totals[i], digits) : "");
            csv_line(out, f);
        }
    for (const auto& [name, value] : r.scalars) {
        std::vector<std::string> f{name, ""};
        f.resize(2 + r.columns.size());
        f.push_back(number(value, digits));
        csv_line(out, f);
    }
    return out;
}

inline void aligned(std::string& out, const std::vector<std::vector<std::string>>& cells)
{
    std::vector<std::size_t> width;
    for (const auto& row : cells)
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (width.size() <= j)
                width.push_back(0);
            width[j] = std::max(width[j], row[j].size());
        }
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const std::string& s = row[j];
            const std::string pad(width[j] - s.size(), ' ');
            line += j == 0 ? s + pad : "  " + pad + s;
        }
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        out += line + '\n';
    }
}

inline std::string render_table(const ResultDocument& r)
{
    constexpr int digits = 6;
    std::string out;
    out += r.command + " (" + r.kind + (r.solver.empty() ? "" : ", " + r.solver) + ")";
    if (r.approximate)
        out += ", approximate";
    if (r.iterations)
        out += ", " + std::to_string(*r.iterations) + " iterations";
    out += '\n';

    if (r.command == "sweep") {
        std::vector<std::vector<std::string>> cells;
        std::vector<std::string> header = r.parameters;
        header.push_back("status");
        header.insert(header.end(), r.metrics.begin(), r.metrics.end());
        cells.push_back(header);
        for (const auto& row : r.rows) {
            std::vector<std::string> f;
            for (double c : row.coordinates)
                f.push_back(number(c, digits));
            f.push_back(row.status);
            for (double v : row.values)
                f.push_back(row.status == "ok" ? number(v, digits) : "-");
            cells.push_back(f);
        }
        out += '\n';
        aligned(out, cells);
    }

    if (!r.scalars.empty()) {
        out += '\n';
        std::vector<std::vector<std::string>> cells;
        for (const auto& [name, value] : r.scalars)
            cells.push_back({name, number(value, digits)});
        aligned(out, cells);
    }
    for (const auto& t : r.tables) {
        out += '\n' + t.name + '\n';
        const bool totals = std::any_of(t.totals.begin(), t.totals.end(), [](const auto& x) { return x.has_value(); });
        std::vector<std::vector<std::string>> cells;
        std::vector<std::string> header{""};
        header.insert(header.end(), r.columns.begin(), r.columns.end());
        if (totals)
            header.push_back("total");
        cells.push_back(header);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            std::vector<std::string> f{t.rows[i]};
            for (double v : t.values[i])
                f.push_back(number(v, digits));
            if (totals)
                f.push_back(t.totals[i] ? number(*t.totals[i], digits) : "");
            cells.push_back(f);
        }
        aligned(out, cells);
    }
    if (!r.warnings.empty()) {
        out += '\n';
        for (const auto& w : r.warnings)
            out += "note: " + w + '\n';
    }
    return out;
}

} // namespace detail

inline std::string render(const ResultDocument& r, Format format)
{
    switch (format) {
    case Format::csv: return detail::render_csv(r);
    case Format::json: return to_json(r).dump(2) + '\n';
    case Format::table: break;
    }
    return detail::render_table(r);
}

} // namespace qnkit::cli
