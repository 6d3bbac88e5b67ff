#pragma once

#include <cstddef>
#include <string>

#include "qnkit/error.hpp"
#include "qnkit/networks/model.hpp"
#include "qnkit/networks/solution.hpp"
#include "qnkit/stations/markovian.hpp"

namespace qnkit::networks {

namespace detail {

inline void require_open_stable(double u, std::size_t center)
{
    if (!(u < 1.0))
        fail(errc::unstable, "center " + std::to_string(center) + " is saturated (utilization "
                                 + std::to_string(u) + ")");
}

/// Per-server utilization of every finite center; throws on the first
/// saturated one.
inline std::vector<double> open_utilization(const NetworkModel& m)
{
    std::vector<double> u(m.centers(), 0.0);
    for (std::size_t i = 0; i < m.centers(); ++i) {
        for (std::size_t c = 0; c < m.classes(); ++c)
            u[i] += m.arrival_rate[c] * m.demand(c, i);
        if (m.is_delay(i))
            continue;
        u[i] /= static_cast<double>(m.servers_at(i).count());
        require_open_stable(u[i], i);
    }
    return u;
}

} // namespace detail

/// Single-class open product-form network: every center is analyzed on its
/// own as M/M/1, M/M/m or M/M/inf at arrival rate lambda V_i.
/// Multi-server utilization is per server.
inline NetworkSolution solve_open_single(const NetworkModel& m)
{
    validate(m);
    require_kind(m, NetworkKind::open);
    if (m.classes() != 1)
        fail(errc::invalid_model, "solve_open_single requires a single class");
    detail::open_utilization(m);

    const double lambda = m.arrival_rate[0];
    auto sol = NetworkSolution::zeros(1, m.centers());
    for (std::size_t i = 0; i < m.centers(); ++i) {
        const double s = m.service(0, i);
        const double arrivals = lambda * m.visits(0, i);
        sol.throughput(0, i) = arrivals;
        if (arrivals == 0.0 || s == 0.0) {
            sol.response_time(0, i) = s;
            continue;
        }
        const Servers servers = m.servers_at(i);
        const auto st = servers.is_infinite() ? stations::mminf(arrivals, 1.0 / s)
                        : servers.count() == 1 ? stations::mm1(arrivals, 1.0 / s)
                                               : stations::mmm(arrivals, 1.0 / s, servers.count());
        sol.utilization(0, i) = st.utilization;
        sol.response_time(0, i) = st.response_time;
        sol.queue_length(0, i) = st.queue_length;
    }
    aggregate(sol, m.visits);
    return sol;
}

/// Multiclass open network. Fixed-rate centers give
/// R[c][i] = S[c][i] / (1 - U_i); multi-server centers need class-independent
/// service and use the M/M/m waiting time; delay centers give R = S.
inline NetworkSolution solve_open_multi(const NetworkModel& m)
{
    validate(m);
    require_kind(m, NetworkKind::open);
    const auto total_u = detail::open_utilization(m);

    const std::size_t classes = m.classes();
    auto sol = NetworkSolution::zeros(classes, m.centers());
    for (std::size_t i = 0; i < m.centers(); ++i) {
        const Servers servers = m.servers_at(i);
        const bool multi = !servers.is_infinite() && servers.count() > 1;

        // Multi-server centers: one common service time among visiting classes.
        double common = -1.0;
        double arrivals = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            const double a = m.arrival_rate[c] * m.visits(c, i);
            if (a == 0.0)
                continue;
            arrivals += a;
            if (common < 0.0)
                common = m.service(c, i);
            else if (multi && m.service(c, i) != common)
                fail(errc::invalid_model, "multi-server center " + std::to_string(i)
                                              + " requires class-independent service times");
        }
        double multi_response = 0.0;
        if (multi && arrivals > 0.0 && common > 0.0)
            multi_response = stations::mmm(arrivals, 1.0 / common, servers.count()).response_time;

        for (std::size_t c = 0; c < classes; ++c) {
            const double s = m.service(c, i);
            const double x = m.arrival_rate[c] * m.visits(c, i);
            double r = s;
            if (servers.is_infinite())
                r = s;
            else if (multi)
                r = (x > 0.0 && s > 0.0) ? multi_response : s;
            else
                r = s / (1.0 - total_u[i]);
            sol.throughput(c, i) = x;
            sol.response_time(c, i) = r;
            sol.queue_length(c, i) = x * r;
            sol.utilization(c, i) = servers.is_infinite() ? x * s : x * s / static_cast<double>(servers.count());
        }
    }
    aggregate(sol, m.visits);
    return sol;
}

} // namespace qnkit::networks
