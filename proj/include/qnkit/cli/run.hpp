#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnkit/cli/document.hpp"
#include "qnkit/cli/result.hpp"
#include "qnkit/error.hpp"
#include "qnkit/markov.hpp"
#include "qnkit/networks.hpp"
#include "qnkit/stations.hpp"

namespace qnkit::cli {

struct RunOptions {
    std::optional<std::string> method; ///< mva, conv, bs, aba or bsb
    std::optional<double> horizon;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::size_t jobs = 1;
    /// Markov analyses: stationary, transient, sojourn, mtta or passage.
    std::optional<std::string> analysis;
    bool until_absorbing = false;
    std::optional<std::string> horizon_units;
    bool time_averaged = false;
};

/// The options that can change a result; `jobs` is deliberately absent.
inline json options_to_json(const RunOptions& o)
{
    json j = json::object();
    if (o.method)
        j["method"] = *o.method;
    if (o.horizon)
        j["horizon"] = number_to_json(*o.horizon);
    if (o.tol)
        j["tol"] = number_to_json(*o.tol);
    if (o.max_iter)
        j["max_iter"] = *o.max_iter;
    if (o.analysis)
        j["analysis"] = *o.analysis;
    if (o.until_absorbing)
        j["transient_until_absorbing"] = true;
    if (o.horizon_units)
        j["horizon_units"] = *o.horizon_units;
    if (o.time_averaged)
        j["time_averaged"] = true;
    return j;
}

namespace detail {

/// Length of one unit in seconds; a year is 365 days.
inline double unit_seconds(const std::string& unit)
{
    if (unit == "seconds")
        return 1.0;
    if (unit == "minutes")
        return 60.0;
    if (unit == "hours")
        return 3600.0;
    if (unit == "days")
        return 86400.0;
    if (unit == "weeks")
        return 7.0 * 86400.0;
    if (unit == "years")
        return 365.0 * 86400.0;
    fail(errc::invalid_parameter,
         "unknown time unit \"" + unit + "\" (expected seconds, minutes, hours, days, weeks or years)");
}

inline void add_row(Table& t, std::string name, std::vector<double> values, std::optional<double> total = std::nullopt)
{
    t.rows.push_back(std::move(name));
    t.values.push_back(std::move(values));
    t.totals.push_back(total);
}

inline ResultDocument run_markov(const MarkovPayload& p, const RunOptions& o)
{
    if (o.method)
        fail(errc::invalid_parameter, "--method does not apply to Markov chains");
    const std::size_t n = p.matrix.rows();

    std::string analysis = o.analysis.value_or(o.horizon ? "transient" : "stationary");
    if (o.until_absorbing) {
        if (o.analysis && *o.analysis != "mtta")
            fail(errc::invalid_parameter, "--transient-until-absorbing conflicts with --analysis " + *o.analysis);
        analysis = "mtta";
    }
    if (analysis != "stationary" && analysis != "transient" && analysis != "sojourn" && analysis != "mtta"
        && analysis != "passage")
        fail(errc::invalid_parameter, "unknown analysis \"" + analysis
                                          + "\" (expected stationary, transient, sojourn, mtta or passage)");

    // Times in the document are in `time_unit`; results are reported in
    // --horizon-units when given. `scale` converts document to output time.
    double scale = 1.0;
    if (o.horizon_units) {
        if (!p.continuous)
            fail(errc::invalid_parameter, "--horizon-units applies to continuous-time chains only");
        if (p.time_unit.empty())
            fail(errc::invalid_parameter, "--horizon-units needs a time_unit in the model");
        scale = unit_seconds(p.time_unit) / unit_seconds(*o.horizon_units);
    } else if (!p.time_unit.empty()) {
        unit_seconds(p.time_unit);
    }

    std::optional<double> horizon;
    std::optional<std::uint64_t> steps;
    if (o.horizon) {
        if (!(*o.horizon >= 0.0) || !std::isfinite(*o.horizon))
            fail(errc::invalid_parameter, "--horizon must be a finite non-negative number");
        if (p.continuous) {
            horizon = *o.horizon / scale;
        } else {
            if (*o.horizon != std::floor(*o.horizon))
                fail(errc::invalid_parameter, "--horizon for a discrete-time chain is a whole number of steps");
            steps = static_cast<std::uint64_t>(*o.horizon);
        }
    }
    if (analysis == "transient" && !o.horizon)
        fail(errc::invalid_parameter, "transient analysis needs --horizon");

    // Absorbing states listed in the document lose their outgoing transitions.
    Matrix a = p.matrix;
    if (analysis == "mtta" || analysis == "sojourn")
        for (std::size_t s : p.absorbing)
            for (std::size_t j = 0; j < n; ++j)
                a(s, j) = p.continuous ? 0.0 : (s == j ? 1.0 : 0.0);

    std::vector<double> init(n, 0.0);
    if (p.initial)
        init = *p.initial;
    else
        init[0] = 1.0;
    const markov::ProbabilityVector p0(init);

    ResultDocument r;
    r.kind = p.continuous ? "markov-ctmc" : "markov-dtmc";
    r.columns = p.states;
    Table t;
    if (analysis == "stationary") {
        r.solver = "stationary";
        const auto pi = p.continuous ? markov::ctmc_solve(markov::GeneratorMatrix(a))
                                     : markov::dtmc_solve(markov::TransitionMatrix(a));
        t.name = "probability";
        add_row(t, "pi", pi.values(), sum(pi.values()));
    } else if (analysis == "transient") {
        r.solver = p.continuous ? "uniformization" : "power";
        const auto pt = p.continuous ? markov::ctmc_solve(markov::GeneratorMatrix(a), *horizon, p0)
                                     : markov::dtmc_solve(markov::TransitionMatrix(a), *steps, p0);
        t.name = "probability";
        add_row(t, "p(t)", pt.values(), sum(pt.values()));
    } else if (analysis == "sojourn") {
        r.solver = "sojourn";
        auto l = p.continuous ? markov::ctmc_exps(markov::GeneratorMatrix(a), p0, horizon, o.time_averaged)
                              : markov::dtmc_exps(markov::TransitionMatrix(a), p0, steps, o.time_averaged);
        if (!o.time_averaged)
            for (double& x : l)
                x *= scale;
        t.name = o.time_averaged ? "fraction" : "sojourn";
        add_row(t, "L", l, sum(l));
    } else if (analysis == "mtta") {
        r.solver = "absorption";
        std::vector<double> l;
        if (p.continuous)
            l = markov::ctmc_exps(markov::GeneratorMatrix(a), p0);
        else
            l = markov::dtmc_exps(markov::TransitionMatrix(a), p0);
        for (double& x : l)
            x *= scale;
        const double mtta = sum(l);
        r.scalars.emplace_back("mtta", mtta);
        t.name = "sojourn";
        add_row(t, "L", l, mtta);
    } else {
        r.solver = "passage";
        const Matrix m = p.continuous ? markov::ctmc_fpt(markov::GeneratorMatrix(a))
                                      : markov::dtmc_fpt(markov::TransitionMatrix(a));
        t.name = "passage_time";
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row(n);
            for (std::size_t j = 0; j < n; ++j)
                row[j] = m(i, j) * scale;
            add_row(t, p.states[i], row);
        }
    }
    r.tables.push_back(std::move(t));
    return r;
}

inline ResultDocument run_station(const StationPayload& p, const RunOptions& o)
{
    if (o.method)
        fail(errc::invalid_parameter, "--method does not apply to single stations");
    using namespace stations;
    StationMetrics s;
    const auto& k = p.states;
    if (p.system == "mm1")
        s = mm1(p.lambda, p.mu, k);
    else if (p.system == "mmm")
        s = mmm(p.lambda, p.mu, p.servers, k);
    else if (p.system == "mminf")
        s = mminf(p.lambda, p.mu, k);
    else if (p.system == "mm1k")
        s = mm1k(p.lambda, p.mu, p.capacity, k);
    else if (p.system == "mmmk")
        s = mmmk(p.lambda, p.mu, p.servers, p.capacity, k);
    else if (p.system == "mg1")
        s = mg1(p.lambda, p.service_mean, p.service_scv, k);
    else if (p.system == "mh1")
        s = mh1(p.lambda, p.rates, p.probabilities, k);
    else
        s = ammm(p.lambda, p.rates, k);

    ResultDocument r;
    r.kind = "station";
    r.solver = p.system;
    r.approximate = s.approximate;
    r.scalars = {{"utilization", s.utilization},
                 {"response_time", s.response_time},
                 {"queue_length", s.queue_length},
                 {"throughput", s.throughput},
                 {"p_empty", s.p_empty}};
    if (s.p_full)
        r.scalars.emplace_back("p_full", *s.p_full);
    if (!k.empty()) {
        for (std::size_t v : k)
            r.columns.push_back(std::to_string(v));
        Table t{"marginal", {}, {}, {}};
        add_row(t, "pi", s.marginals);
        r.tables.push_back(std::move(t));
    }
    return r;
}

/// Class rows plus an "all" row holding per-center sums; `totals` are the
/// class aggregates followed by the system value.
inline Table per_class_table(const char* name, const Matrix& m, const NetworkPayload& p,
                             const std::vector<std::optional<double>>& totals)
{
    Table t{name, {}, {}, {}};
    std::vector<double> all(m.cols(), 0.0);
    for (std::size_t c = 0; c < m.rows(); ++c) {
        add_row(t, p.classes[c], std::vector<double>(m.row(c).begin(), m.row(c).end()), totals[c]);
        for (std::size_t i = 0; i < m.cols(); ++i)
            all[i] += m(c, i);
    }
    add_row(t, "all", all, totals.back());
    return t;
}

inline std::vector<std::optional<double>> with_system(const std::vector<double>& per_class, double system)
{
    std::vector<std::optional<double>> v(per_class.begin(), per_class.end());
    v.push_back(system);
    return v;
}

inline void network_tables(ResultDocument& r, const networks::NetworkSolution& s, const NetworkPayload& p)
{
    r.columns = p.centers;
    const std::size_t classes = s.classes();

    r.tables.push_back(per_class_table("U", s.utilization, p, std::vector<std::optional<double>>(classes + 1)));
    Table rt = per_class_table("R", s.response_time, p, with_system(s.class_response_time, s.system_response_time));
    // Aggregate response time at a center is throughput-weighted, not summed.
    for (std::size_t i = 0; i < s.centers(); ++i) {
        double x = 0.0;
        double w = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            x += s.throughput(c, i);
            w += s.throughput(c, i) * s.response_time(c, i);
        }
        rt.values.back()[i] = x > 0.0 ? w / x : std::numeric_limits<double>::quiet_NaN();
    }
    r.tables.push_back(std::move(rt));
    r.tables.push_back(per_class_table("Q", s.queue_length, p, with_system(s.class_queue_length, s.system_queue_length)));
    r.tables.push_back(per_class_table("X", s.throughput, p, with_system(s.class_throughput, s.system_throughput)));

    r.scalars = {{"throughput", s.system_throughput},
                 {"response_time", s.system_response_time},
                 {"queue_length", s.system_queue_length}};
    if (classes > 1)
        for (std::size_t c = 0; c < classes; ++c) {
            r.scalars.emplace_back("throughput[" + p.classes[c] + "]", s.class_throughput[c]);
            r.scalars.emplace_back("response_time[" + p.classes[c] + "]", s.class_response_time[c]);
        }
    if (s.normalization_constant)
        r.scalars.emplace_back("G", *s.normalization_constant);
    if (s.log_normalization_constant)
        r.scalars.emplace_back("log_G", *s.log_normalization_constant);
    r.warnings = s.warnings;
    r.approximate = s.approximate;
    if (s.iterations)
        r.iterations = *s.iterations;
    r.residual = s.residual;
}

inline ResultDocument solve_network(const NetworkPayload& p, const RunOptions& o)
{
    using namespace networks;
    const auto& m = p.model;
    const bool open = m.kind == NetworkKind::open;
    ResultDocument r;
    r.kind = open ? "open-net" : "closed-net";
    NetworkSolution s;
    if (open) {
        if (o.method)
            fail(errc::invalid_parameter, "--method " + *o.method + " does not apply to open networks");
        r.solver = m.classes() == 1 ? "jackson" : "jackson-multiclass";
        s = m.classes() == 1 ? solve_open_single(m) : solve_open_multi(m);
    } else {
        const std::string method = o.method.value_or("mva");
        BardSchweitzerOptions bs;
        if (o.tol)
            bs.tol = *o.tol;
        if (o.max_iter)
            bs.max_iter = *o.max_iter;
        bool ld = false;
        for (std::size_t i = 0; i < m.centers(); ++i)
            ld = ld || m.is_load_dependent(i) || (!m.is_delay(i) && m.servers_at(i).count() != 1);
        if (method == "mva" && m.classes() == 1) {
            r.solver = ld ? "mva-ld" : "mva";
            s = ld ? solve_closed_single_mva_ld(m) : solve_closed_single_mva(m);
        } else if (method == "mva") {
            r.solver = "multiclass-mva";
            s = solve_closed_multi_mva(m);
        } else if (method == "conv") {
            if (m.classes() != 1)
                fail(errc::invalid_parameter, "--method conv supports single-class models only");
            r.solver = "convolution";
            s = solve_closed_single_conv(m);
        } else if (method == "bs") {
            r.solver = "bard-schweitzer";
            s = solve_closed_multi_bs(m, bs);
        } else if (method == "aba" || method == "bsb") {
            fail(errc::invalid_parameter, "--method " + method + " is a bounds method; use the bounds command");
        } else {
            fail(errc::invalid_parameter, "unknown method \"" + method + "\"");
        }
    }
    network_tables(r, s, p);
    return r;
}

inline ResultDocument bound_network(const NetworkPayload& p, const RunOptions& o)
{
    using namespace networks;
    const std::string method = o.method.value_or("aba");
    if (method != "aba" && method != "bsb")
        fail(errc::invalid_parameter, "bounds need --method aba or bsb");
    const auto bm = method == "aba" ? BoundsMethod::aba : BoundsMethod::bsb;
    const auto& m = p.model;
    const bool open = m.kind == NetworkKind::open;
    const auto b = open ? bounds_open(m, bm) : bounds_closed(m, bm);

    ResultDocument r;
    r.kind = open ? "open-net" : "closed-net";
    r.solver = method;
    r.columns = {"throughput_lower", "throughput_upper", "response_lower", "response_upper"};
    if (open)
        r.columns.push_back("saturation");
    Table t{"bounds", {}, {}, {}};
    double xl = 0.0;
    double xu = 0.0;
    double rl = std::numeric_limits<double>::infinity();
    double ru = 0.0;
    for (std::size_t c = 0; c < m.classes(); ++c) {
        std::vector<double> row{b.throughput_lower[c], b.throughput_upper[c], b.response_lower[c], b.response_upper[c]};
        if (open)
            row.push_back(b.saturation[c]);
        add_row(t, p.classes[c], row);
        xl += b.throughput_lower[c];
        xu += b.throughput_upper[c];
        const bool active = open ? m.arrival_rate[c] > 0.0 : m.population[c] > 0;
        if (active) {
            rl = std::min(rl, b.response_lower[c]);
            ru = std::max(ru, b.response_upper[c]);
        }
    }
    if (!(rl <= ru))
        rl = ru = std::numeric_limits<double>::quiet_NaN();
    // System response time is a throughput-weighted mean of class values,
    // so it lies between the extreme class bounds.
    std::vector<double> all{xl, xu, rl, ru};
    if (open)
        all.push_back(std::numeric_limits<double>::quiet_NaN());
    add_row(t, "all", all);
    r.tables.push_back(std::move(t));
    r.scalars = {{"throughput_lower", xl}, {"throughput_upper", xu}};

    for (std::size_t c = 0; c < m.classes(); ++c)
        for (std::size_t i : b.bottlenecks[c])
            r.warnings.push_back("bottleneck for " + p.classes[c] + ": " + p.centers[i]);
    return r;
}

} // namespace detail

/// Solves or bounds a document; `command` is solve or bounds.
inline ResultDocument run(const std::string& command, const ModelDocument& doc, const RunOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    ResultDocument r;
    if (command == "solve") {
        if (const auto* mk = std::get_if<MarkovPayload>(&doc.payload))
            r = detail::run_markov(*mk, options);
        else if (const auto* st = std::get_if<StationPayload>(&doc.payload))
            r = detail::run_station(*st, options);
        else
            r = detail::solve_network(std::get<NetworkPayload>(doc.payload), options);
    } else if (command == "bounds") {
        const auto* net = std::get_if<NetworkPayload>(&doc.payload);
        if (!net)
            fail(errc::invalid_parameter, "bounds apply to open-net and closed-net models");
        r = detail::bound_network(*net, options);
    } else {
        fail(errc::invalid_parameter, "unknown command \"" + command + "\"");
    }
    r.command = command;
    r.model = doc.source;
    r.options = options_to_json(options);
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace qnkit::cli
