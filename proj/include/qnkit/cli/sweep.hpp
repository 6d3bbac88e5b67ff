#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnkit/cli/document.hpp"
#include "qnkit/cli/result.hpp"
#include "qnkit/cli/run.hpp"
#include "qnkit/error.hpp"

namespace qnkit::cli {

namespace detail {

/// Converts `stations[2].service[0]` to the JSON pointer `/stations/2/service/0`.
inline json::json_pointer target_pointer(const std::string& target)
{
    std::string out;
    std::string token;
    auto flush = [&] {
        if (token.empty())
            fail(errc::schema_error, "sweep target \"" + target + "\" is malformed");
        out += "/" + token;
        token.clear();
    };
    for (std::size_t i = 0; i < target.size(); ++i) {
        const char ch = target[i];
        if (ch == '.') {
            if (i > 0 && target[i - 1] == ']')
                continue;
            flush();
        } else if (ch == '[') {
            if (i > 0 && target[i - 1] != ']')
                flush();
            const auto close = target.find(']', i);
            if (close == std::string::npos || close == i + 1)
                fail(errc::schema_error, "sweep target \"" + target + "\" is malformed");
            token = target.substr(i + 1, close - i - 1);
            if (token.find_first_not_of("0123456789") != std::string::npos)
                fail(errc::schema_error, "sweep target \"" + target + "\" has a non-numeric index");
            flush();
            i = close;
        } else if (ch == '/' || ch == '~') {
            fail(errc::schema_error, "sweep target \"" + target + "\" is malformed");
        } else {
            token += ch;
        }
    }
    if (!token.empty())
        flush();
    if (out.empty())
        fail(errc::schema_error, "sweep target is empty");
    return json::json_pointer(out);
}

struct PointOutcome {
    std::string status;
    std::vector<std::pair<std::string, double>> scalars;
    std::string message;
    std::string solver;
};

inline PointOutcome skipped(std::string status, std::string message)
{
    return {std::move(status), {}, std::move(message), {}};
}

/// Instantiates and solves one grid point.
inline PointOutcome run_point(const ModelDocument& doc, const std::vector<json::json_pointer>& pointers,
                              const std::vector<double>& coords, const std::string& command, const RunOptions& options)
{
    const auto& spec = *doc.sweep;
    json j = doc.source;
    j.erase("sweep");
    for (std::size_t p = 0; p < spec.parameters.size(); ++p) {
        if (spec.parameters[p].target.empty())
            continue;
        json& slot = j[pointers[p]];
        if (slot.is_number_integer() || slot.is_number_unsigned()) {
            const double v = std::round(coords[p]);
            if (v < 0.0)
                return skipped("infeasible", spec.parameters[p].name + " rounds to a negative count");
            slot = static_cast<long long>(v);
        } else {
            slot = coords[p];
        }
    }
    if (spec.mix) {
        const auto& mix = *spec.mix;
        const auto total = static_cast<long long>(mix.total);
        std::vector<long long> pop;
        long long assigned = 0;
        for (const auto& name : mix.fractions) {
            std::size_t p = 0;
            while (spec.parameters[p].name != name)
                ++p;
            const auto n = static_cast<long long>(std::llround(coords[p] * static_cast<double>(total)));
            pop.push_back(n);
            assigned += n;
        }
        pop.push_back(total - assigned);
        for (std::size_t c = 0; c < pop.size(); ++c)
            if (pop[c] < 0)
                return skipped("infeasible", "class " + std::to_string(c + 1) + " population would be negative");
        j["population"] = pop;
    }

    try {
        const ModelDocument point = document_from_json(j, false);
        auto r = run(command, point, options);
        return {"ok", std::move(r.scalars), {}, r.solver};
    } catch (const error& e) {
        if (e.code() == errc::unstable)
            return skipped("unstable", e.what());
        if (e.code() == errc::validation_error || e.code() == errc::schema_error)
            return skipped("infeasible", e.what());
        return skipped("failed", e.what());
    }
}

} // namespace detail

/// Runs `command` (solve or bounds) at every grid point of the document's
/// sweep block. Points are independent and may run on `options.jobs`
/// threads; rows are emitted in grid order whatever the thread count.
inline ResultDocument run_sweep(const ModelDocument& doc, const RunOptions& options,
                                const std::string& command = "solve")
{
    const auto start = std::chrono::steady_clock::now();
    if (!doc.sweep)
        fail(errc::schema_error, "sweep: the model has no sweep block");
    const auto& spec = *doc.sweep;

    std::vector<json::json_pointer> pointers;
    for (const auto& p : spec.parameters) {
        if (p.target.empty()) {
            pointers.emplace_back();
            continue;
        }
        auto ptr = detail::target_pointer(p.target);
        if (!doc.source.contains(ptr) || !doc.source.at(ptr).is_number())
            fail(errc::schema_error, "sweep target \"" + p.target + "\" does not name a number in the model");
        pointers.push_back(std::move(ptr));
    }

    // Grid in row-major order: the first parameter varies slowest.
    std::vector<std::vector<double>> grid{{}};
    for (const auto& p : spec.parameters) {
        std::vector<std::vector<double>> next;
        for (const auto& g : grid)
            for (double v : p.values) {
                next.push_back(g);
                next.back().push_back(v);
            }
        grid = std::move(next);
    }

    std::vector<detail::PointOutcome> outcomes(grid.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = cursor++; i < grid.size() && !failed; i = cursor++) {
            try {
                outcomes[i] = detail::run_point(doc, pointers, grid[i], command, options);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, grid.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    ResultDocument r;
    r.command = "sweep";
    r.kind = doc.kind;
    r.model = doc.source;
    r.options = options_to_json(options);
    for (const auto& p : spec.parameters)
        r.parameters.push_back(p.name);
    for (const auto& o : outcomes)
        if (o.status == "ok") {
            r.solver = o.solver;
            for (const auto& [name, value] : o.scalars)
                r.metrics.push_back(name);
            break;
        }
    std::map<std::string, std::size_t> column;
    for (std::size_t k = 0; k < r.metrics.size(); ++k)
        column[r.metrics[k]] = k;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SweepRow row{grid[i], outcomes[i].status,
                     std::vector<double>(r.metrics.size(), std::numeric_limits<double>::quiet_NaN()),
                     outcomes[i].message};
        for (const auto& [name, value] : outcomes[i].scalars)
            if (auto it = column.find(name); it != column.end())
                row.values[it->second] = value;
        r.rows.push_back(std::move(row));
    }
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace qnkit::cli
