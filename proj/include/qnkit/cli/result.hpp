#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnkit/error.hpp"

namespace qnkit::cli {

using json = nlohmann::json;

/// A labeled grid of values; every table in a result shares the result's
/// column labels. `totals`, when present, holds one optional value per row.
struct Table {
    std::string name;
    std::vector<std::string> rows;
    std::vector<std::vector<double>> values;
    std::vector<std::optional<double>> totals;
};

struct SweepRow {
    std::vector<double> coordinates;
    std::string status; ///< ok, infeasible, unstable or failed
    std::vector<double> values;
    std::string message;
};

struct ResultDocument {
    int schema_version = 1;
    std::string command;
    std::string kind;
    std::string solver;
    json model;
    json options;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<std::string> columns;
    std::vector<Table> tables;
    // Sweep output: coordinate names, value names and one row per point.
    std::vector<std::string> parameters;
    std::vector<std::string> metrics;
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
    bool approximate = false;
    std::optional<std::uint64_t> iterations;
    std::optional<double> residual;
    double elapsed_seconds = 0.0;
};

namespace detail {

/// Bitwise equality, so NaN payloads and signed zeros round-trip exactly.
inline bool same_bits(double a, double b) noexcept
{
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

inline bool same_bits(const std::vector<double>& a, const std::vector<double>& b) noexcept
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_bits(a[i], b[i]))
            return false;
    return true;
}

inline bool same_bits(const std::optional<double>& a, const std::optional<double>& b) noexcept
{
    return a.has_value() == b.has_value() && (!a || same_bits(*a, *b));
}

} // namespace detail

inline bool operator==(const Table& a, const Table& b)
{
    if (a.name != b.name || a.rows != b.rows || a.values.size() != b.values.size() || a.totals.size() != b.totals.size())
        return false;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (!detail::same_bits(a.values[i], b.values[i]))
            return false;
    for (std::size_t i = 0; i < a.totals.size(); ++i)
        if (!detail::same_bits(a.totals[i], b.totals[i]))
            return false;
    return true;
}

inline bool operator==(const SweepRow& a, const SweepRow& b)
{
    return detail::same_bits(a.coordinates, b.coordinates) && a.status == b.status
           && detail::same_bits(a.values, b.values) && a.message == b.message;
}

inline bool operator==(const ResultDocument& a, const ResultDocument& b)
{
    if (a.scalars.size() != b.scalars.size())
        return false;
    for (std::size_t i = 0; i < a.scalars.size(); ++i)
        if (a.scalars[i].first != b.scalars[i].first || !detail::same_bits(a.scalars[i].second, b.scalars[i].second))
            return false;
    return a.schema_version == b.schema_version && a.command == b.command && a.kind == b.kind
           && a.solver == b.solver && a.model == b.model && a.options == b.options && a.columns == b.columns
           && a.tables == b.tables && a.parameters == b.parameters && a.metrics == b.metrics && a.rows == b.rows
           && a.warnings == b.warnings && a.approximate == b.approximate && a.iterations == b.iterations
           && detail::same_bits(a.residual, b.residual) && detail::same_bits(a.elapsed_seconds, b.elapsed_seconds);
}

// JSON has no non-finite numbers; they are written as strings.

inline json number_to_json(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

inline double number_from_json(const json& j)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
    }
    fail(errc::schema_error, "expected a number, got " + j.dump());
}

inline json numbers_to_json(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v)
        a.push_back(number_to_json(x));
    return a;
}

inline std::vector<double> numbers_from_json(const json& j)
{
    std::vector<double> v;
    for (const auto& x : j)
        v.push_back(number_from_json(x));
    return v;
}

inline json to_json(const ResultDocument& r)
{
    json j;
    j["schema_version"] = r.schema_version;
    j["command"] = r.command;
    j["kind"] = r.kind;
    j["solver"] = r.solver;
    j["model"] = r.model;
    j["options"] = r.options;
    json scalars = json::array();
    for (const auto& [name, value] : r.scalars)
        scalars.push_back({{"name", name}, {"value", number_to_json(value)}});
    j["scalars"] = scalars;
    j["columns"] = r.columns;
    json tables = json::array();
    for (const auto& t : r.tables) {
        json jt{{"name", t.name}, {"rows", t.rows}};
        json values = json::array();
        for (const auto& row : t.values)
            values.push_back(numbers_to_json(row));
        jt["values"] = values;
        json totals = json::array();
        for (const auto& x : t.totals)
            totals.push_back(x ? number_to_json(*x) : json(nullptr));
        jt["totals"] = totals;
        tables.push_back(jt);
    }
    j["tables"] = tables;
    j["parameters"] = r.parameters;
    j["metrics"] = r.metrics;
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"coordinates", numbers_to_json(row.coordinates)},
                        {"status", row.status},
                        {"values", numbers_to_json(row.values)},
                        {"message", row.message}});
    j["rows"] = rows;
    j["warnings"] = r.warnings;
    j["approximate"] = r.approximate;
    j["iterations"] = r.iterations ? json(*r.iterations) : json(nullptr);
    j["residual"] = r.residual ? number_to_json(*r.residual) : json(nullptr);
    j["elapsed_seconds"] = number_to_json(r.elapsed_seconds);
    return j;
}

inline ResultDocument result_from_json(const json& j)
{
    try {
        ResultDocument r;
        r.schema_version = j.at("schema_version").get<int>();
        r.command = j.at("command").get<std::string>();
        r.kind = j.at("kind").get<std::string>();
        r.solver = j.at("solver").get<std::string>();
        r.model = j.at("model");
        r.options = j.at("options");
        for (const auto& s : j.at("scalars"))
            r.scalars.emplace_back(s.at("name").get<std::string>(), number_from_json(s.at("value")));
        r.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& jt : j.at("tables")) {
            Table t;
            t.name = jt.at("name").get<std::string>();
            t.rows = jt.at("rows").get<std::vector<std::string>>();
            for (const auto& row : jt.at("values"))
                t.values.push_back(numbers_from_json(row));
            for (const auto& x : jt.at("totals"))
                t.totals.push_back(x.is_null() ? std::nullopt : std::optional<double>(number_from_json(x)));
            r.tables.push_back(std::move(t));
        }
        r.parameters = j.at("parameters").get<std::vector<std::string>>();
        r.metrics = j.at("metrics").get<std::vector<std::string>>();
        for (const auto& jr : j.at("rows"))
            r.rows.push_back({numbers_from_json(jr.at("coordinates")), jr.at("status").get<std::string>(),
                              numbers_from_json(jr.at("values")), jr.at("message").get<std::string>()});
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        r.approximate = j.at("approximate").get<bool>();
        if (!j.at("iterations").is_null())
            r.iterations = j.at("iterations").get<std::uint64_t>();
        if (!j.at("residual").is_null())
            r.residual = number_from_json(j.at("residual"));
        r.elapsed_seconds = number_from_json(j.at("elapsed_seconds"));
        return r;
    } catch (const json::exception& e) {
        fail(errc::schema_error, std::string("malformed result document: ") + e.what());
    }
}

} // namespace qnkit::cli
