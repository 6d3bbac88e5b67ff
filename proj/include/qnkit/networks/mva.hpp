#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/networks/model.hpp"
#include "qnkit/networks/solution.hpp"

namespace qnkit::networks {

/// p_i(0|n) below this (before clamping) raises a NumericalUnderflow warning.
inline constexpr double idle_probability_warning = 1e-6;

namespace detail {

inline void require_closed_single(const NetworkModel& m, const char* solver)
{
    validate(m);
    require_kind(m, NetworkKind::closed);
    if (m.classes() != 1)
        fail(errc::invalid_model, std::string(solver) + " requires a single class");
}

enum class CenterType { fixed, delay, load_dependent };

/// S_i(j) for j = 1..n at a load-dependent or multi-server center.
inline std::vector<double> service_table(const NetworkModel& m, std::size_t i, std::size_t n)
{
    std::vector<double> s(n);
    if (m.is_load_dependent(i)) {
        const auto& table = m.load_dependent[i];
        if (table.size() < n)
            fail(errc::invalid_model, "load_dependent[" + std::to_string(i) + "] lists "
                                          + std::to_string(table.size()) + " service times but the population is "
                                          + std::to_string(n));
        std::copy_n(table.begin(), n, s.begin());
    } else {
        const auto servers = static_cast<double>(m.servers_at(i).count());
        for (std::size_t j = 1; j <= n; ++j)
            s[j - 1] = m.service(0, i) / std::min(static_cast<double>(j), servers);
    }
    return s;
}

/// Exact single-class MVA. Fixed-rate and delay centers follow the plain
/// recursion; multi-server and load-dependent centers carry their marginal
/// queue-length distribution.
inline NetworkSolution mva_kernel(const NetworkModel& m)
{
    const std::size_t centers = m.centers();
    const std::size_t n_total = m.population[0];
    const double z = m.think(0);

    std::vector<CenterType> type(centers, CenterType::fixed);
    std::vector<std::vector<double>> table(centers);
    for (std::size_t i = 0; i < centers; ++i) {
        if (m.is_load_dependent(i) || (!m.is_delay(i) && m.servers_at(i).count() > 1)) {
            type[i] = CenterType::load_dependent;
            table[i] = service_table(m, i, n_total);
        } else if (m.is_delay(i)) {
            type[i] = CenterType::delay;
        }
    }

    auto sol = NetworkSolution::zeros(1, centers);
    sol.marginals.assign(centers, {});
    if (n_total == 0) {
        for (std::size_t i = 0; i < centers; ++i) {
            sol.response_time(0, i) = m.service(0, i);
            if (type[i] == CenterType::load_dependent)
                sol.marginals[i] = {1.0};
        }
        aggregate(sol, m.visits);
        return sol;
    }

    double total_demand = z;
    for (std::size_t i = 0; i < centers; ++i) {
        if (type[i] == CenterType::load_dependent)
            for (double s : table[i])
                total_demand += s * m.visits(0, i);
        else
            total_demand += m.demand(0, i);
    }
    if (!(total_demand > 0.0))
        fail(errc::invalid_model, "all service demands and the think time are zero");

    std::vector<double> q(centers, 0.0);
    std::vector<double> r(centers, 0.0);
    // p[i][j] = p_i(j | n - 1), updated in place to p_i(j | n).
    std::vector<std::vector<double>> p(centers);
    for (std::size_t i = 0; i < centers; ++i)
        if (type[i] == CenterType::load_dependent) {
            p[i].assign(n_total + 1, 0.0);
            p[i][0] = 1.0;
        }
    std::vector<char> warned(centers, 0);
    double x = 0.0;

    for (std::size_t n = 1; n <= n_total; ++n) {
        double total_r = 0.0;
        for (std::size_t i = 0; i < centers; ++i) {
            switch (type[i]) {
            case CenterType::fixed:
                r[i] = m.service(0, i) * (1.0 + q[i]);
                break;
            case CenterType::delay:
                r[i] = m.service(0, i);
                break;
            case CenterType::load_dependent: {
                double acc = 0.0;
                for (std::size_t j = 1; j <= n; ++j)
                    acc += static_cast<double>(j) * table[i][j - 1] * p[i][j - 1];
                r[i] = acc;
                break;
            }
            }
            total_r += m.visits(0, i) * r[i];
        }
        if (!(z + total_r > 0.0))
            fail(errc::invalid_model, "zero cycle time at population " + std::to_string(n));
        x = static_cast<double>(n) / (z + total_r);
        for (std::size_t i = 0; i < centers; ++i) {
            q[i] = x * m.visits(0, i) * r[i];
            if (type[i] != CenterType::load_dependent)
                continue;
            auto& pi = p[i];
            double busy = 0.0;
            for (std::size_t j = n; j >= 1; --j) {
                pi[j] = x * m.visits(0, i) * table[i][j - 1] * pi[j - 1];
                busy += pi[j];
            }
            double idle = 1.0 - busy;
            if (idle < -idle_probability_warning && !warned[i]) {
                warned[i] = 1;
                sol.warnings.push_back("NumericalUnderflow: center " + std::to_string(i) + " idle probability "
                                       + std::to_string(idle) + " at population " + std::to_string(n)
                                       + " clamped to [0, 1]");
            }
            pi[0] = std::clamp(idle, 0.0, 1.0);
        }
    }

    for (std::size_t i = 0; i < centers; ++i) {
        const double xi = x * m.visits(0, i);
        sol.throughput(0, i) = xi;
        sol.queue_length(0, i) = q[i];
        switch (type[i]) {
        case CenterType::fixed:
        case CenterType::delay:
            sol.response_time(0, i) = r[i];
            sol.utilization(0, i) = xi * m.service(0, i);
            break;
        case CenterType::load_dependent:
            sol.response_time(0, i) = r[i];
            sol.utilization(0, i) = m.is_load_dependent(i)
                                        ? 1.0 - p[i][0]
                                        : xi * m.service(0, i) / static_cast<double>(m.servers_at(i).count());
            sol.marginals[i] = p[i];
            break;
        }
    }
    aggregate(sol, m.visits);
    return sol;
}

} // namespace detail

/// Exact MVA for single-class closed networks with fixed-rate, multi-server
/// and delay centers. Multi-server utilization is per server.
inline NetworkSolution solve_closed_single_mva(const NetworkModel& m)
{
    detail::require_closed_single(m, "solve_closed_single_mva");
    for (std::size_t i = 0; i < m.centers(); ++i)
        if (m.is_load_dependent(i))
            fail(errc::invalid_model, "center " + std::to_string(i)
                                          + " is load-dependent; use solve_closed_single_mva_ld");
    return detail::mva_kernel(m);
}

/// Exact MVA with general load-dependent centers. Utilization of a
/// load-dependent center is 1 - p_i(0|N); marginals are returned for every
/// load-dependent and multi-server center.
inline NetworkSolution solve_closed_single_mva_ld(const NetworkModel& m)
{
    detail::require_closed_single(m, "solve_closed_single_mva_ld");
    return detail::mva_kernel(m);
}

} // namespace qnkit::networks
