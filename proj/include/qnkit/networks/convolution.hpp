#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/networks/model.hpp"
#include "qnkit/networks/mva.hpp"
#include "qnkit/networks/solution.hpp"

namespace qnkit::networks {

/// Buzen's convolution for single-class closed networks of fixed-rate
/// centers without think time. Demands are divided by their maximum before
/// the recursion; G(N) is reported as exp(log G) with the scale restored.
inline NetworkSolution solve_closed_single_conv(const NetworkModel& m)
{
    detail::require_closed_single(m, "solve_closed_single_conv");
    const std::size_t centers = m.centers();
    for (std::size_t i = 0; i < centers; ++i) {
        if (m.is_delay(i) || m.servers_at(i).count() != 1 || m.is_load_dependent(i))
            fail(errc::invalid_model, "convolution supports fixed-rate centers only (center " + std::to_string(i) + ")");
    }
    if (m.think(0) != 0.0)
        fail(errc::invalid_model, "convolution does not support think time");

    const std::size_t n_total = m.population[0];
    std::vector<double> d(centers);
    for (std::size_t i = 0; i < centers; ++i)
        d[i] = m.demand(0, i);
    const double scale = *std::max_element(d.begin(), d.end());
    if (!(scale > 0.0))
        fail(errc::invalid_model, "all service demands are zero");
    for (double& x : d)
        x /= scale;

    // g[n] = G(n) / scale^n
    std::vector<double> g(n_total + 1, 0.0);
    g[0] = 1.0;
    for (double dk : d)
        for (std::size_t n = 1; n <= n_total; ++n)
            g[n] += dk * g[n - 1];

    auto sol = NetworkSolution::zeros(1, centers);
    const double log_g = std::log(g[n_total]) + static_cast<double>(n_total) * std::log(scale);
    sol.log_normalization_constant = log_g;
    sol.normalization_constant = std::exp(log_g);

    if (n_total == 0) {
        for (std::size_t i = 0; i < centers; ++i)
            sol.response_time(0, i) = m.service(0, i);
        aggregate(sol, m.visits);
        return sol;
    }

    const double x = g[n_total - 1] / g[n_total] / scale;
    for (std::size_t i = 0; i < centers; ++i) {
        // Q_i = sum_{n=1}^{N} d_i^n g(N - n) / g(N)
        double q = 0.0;
        double power = 1.0;
        for (std::size_t n = 1; n <= n_total; ++n) {
            power *= d[i];
            q += power * g[n_total - n];
        }
        q /= g[n_total];
        const double xi = x * m.visits(0, i);
        sol.throughput(0, i) = xi;
        sol.utilization(0, i) = x * m.demand(0, i);
        sol.queue_length(0, i) = q;
        sol.response_time(0, i) = m.visits(0, i) > 0.0 ? q / xi : m.service(0, i);
    }
    aggregate(sol, m.visits);
    return sol;
}

} // namespace qnkit::networks
