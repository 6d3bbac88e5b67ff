#pragma once

// Property checks on network solutions. Each returns an empty string when
// the property holds, otherwise a description of the first violation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>

#include "qnkit/networks.hpp"

namespace invariants {

using qnkit::networks::NetworkModel;
using qnkit::networks::NetworkSolution;

inline bool close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-12});
}

inline std::string describe(const char* what, std::size_t c, std::size_t i, double got, double want)
{
    std::ostringstream os;
    os.precision(17);
    os << what << " at class " << c << " center " << i << ": " << got << " vs " << want;
    return os.str();
}

/// X[c][i] = X_c V[c][i].
inline std::string forced_flow(const NetworkModel& m, const NetworkSolution& s, double tol = 1e-9)
{
    for (std::size_t c = 0; c < m.classes(); ++c)
        for (std::size_t i = 0; i < m.centers(); ++i)
            if (!close(s.throughput(c, i), s.class_throughput[c] * m.visits(c, i), tol))
                return describe("forced flow", c, i, s.throughput(c, i), s.class_throughput[c] * m.visits(c, i));
    return {};
}

/// U[c][i] m_i = X_c S[c][i] V[c][i] at fixed-rate, multi-server and delay centers.
inline std::string utilization_law(const NetworkModel& m, const NetworkSolution& s, double tol = 1e-9)
{
    for (std::size_t c = 0; c < m.classes(); ++c)
        for (std::size_t i = 0; i < m.centers(); ++i) {
            if (m.is_load_dependent(i))
                continue;
            const double servers = m.is_delay(i) ? 1.0 : static_cast<double>(m.servers_at(i).count());
            const double want = s.class_throughput[c] * m.demand(c, i);
            if (!close(s.utilization(c, i) * servers, want, tol))
                return describe("utilization law", c, i, s.utilization(c, i) * servers, want);
        }
    return {};
}

/// Q[c][i] = X[c][i] R[c][i].
inline std::string littles_law(const NetworkModel& m, const NetworkSolution& s, double tol = 1e-9)
{
    for (std::size_t c = 0; c < m.classes(); ++c)
        for (std::size_t i = 0; i < m.centers(); ++i)
            if (!close(s.queue_length(c, i), s.throughput(c, i) * s.response_time(c, i), tol))
                return describe("Little's law", c, i, s.queue_length(c, i), s.throughput(c, i) * s.response_time(c, i));
    return {};
}

/// sum Q + sum_c X_c Z_c = sum_c N_c, and N_c = X_c (R_c + Z_c).
inline std::string population_conservation(const NetworkModel& m, const NetworkSolution& s, double tol = 1e-6)
{
    double total = 0.0;
    double population = 0.0;
    for (std::size_t c = 0; c < m.classes(); ++c) {
        total += s.class_throughput[c] * m.think(c);
        population += static_cast<double>(m.population[c]);
        const double cycle = s.class_throughput[c] * (s.class_response_time[c] + m.think(c));
        if (!close(cycle, static_cast<double>(m.population[c]), tol))
            return describe("response time law", c, 0, cycle, static_cast<double>(m.population[c]));
    }
    total += s.system_queue_length;
    if (!close(total, population, tol))
        return describe("population conservation", 0, 0, total, population);
    return {};
}

/// Marginals sum to one and are non-negative.
inline std::string marginals_normalized(const NetworkSolution& s, double tol = 1e-9)
{
    for (std::size_t i = 0; i < s.marginals.size(); ++i) {
        if (s.marginals[i].empty())
            continue;
        double sum = 0.0;
        for (double p : s.marginals[i]) {
            if (p < 0.0)
                return describe("negative marginal", 0, i, p, 0.0);
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol)
            return describe("marginal normalization", 0, i, sum, 1.0);
    }
    return {};
}

inline std::string closed_all(const NetworkModel& m, const NetworkSolution& s)
{
    for (auto check : {forced_flow(m, s), utilization_law(m, s), littles_law(m, s), population_conservation(m, s),
                       marginals_normalized(s)})
        if (!check.empty())
            return check;
    return {};
}

inline std::string open_all(const NetworkModel& m, const NetworkSolution& s)
{
    for (auto check : {forced_flow(m, s), utilization_law(m, s), littles_law(m, s)})
        if (!check.empty())
            return check;
    return {};
}

} // namespace invariants
