#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qnkit/stations/metrics.hpp"

namespace qnkit::stations {

/// M/M/1 queue.
inline StationMetrics mm1(double lambda, double mu, const StateList& k = {})
{
    detail::require_rate(lambda, "lambda");
    detail::require_rate(mu, "mu");
    const double rho = lambda / mu;
    detail::require_stable(rho, "M/M/1 requires lambda < mu");
    StationMetrics s;
    s.utilization = rho;
    s.queue_length = rho / (1.0 - rho);
    s.response_time = 1.0 / (mu - lambda);
    s.throughput = lambda;
    s.p_empty = 1.0 - rho;
    for (std::size_t state : k)
        s.marginals.push_back((1.0 - rho) * std::pow(rho, static_cast<double>(state)));
    return s;
}

/// M/M/m queue with m identical servers. The normalizing sum for pi_0 is
/// evaluated by Horner's rule so that large m does not overflow.
inline StationMetrics mmm(double lambda, double mu, std::size_t m, const StateList& k = {})
{
    detail::require_rate(lambda, "lambda");
    detail::require_rate(mu, "mu");
    if (m < 1)
        fail(errc::invalid_server_count, "M/M/m requires at least one server");
    const double md = static_cast<double>(m);
    const double a = lambda / mu; // offered load m * rho
    const double rho = a / md;
    detail::require_stable(rho, "M/M/m requires lambda < m mu");

    double am_over_mfact = 1.0; // a^m / m!
    for (std::size_t j = 1; j <= m; ++j)
        am_over_mfact *= a / static_cast<double>(j);
    const double p0 = 1.0 / (truncated_exp_sum(a, m - 1) + am_over_mfact / (1.0 - rho));
    const double erlang_c = am_over_mfact / (1.0 - rho) * p0;

    StationMetrics s;
    s.utilization = rho;
    s.queue_length = a + erlang_c * rho / (1.0 - rho);
    s.throughput = lambda;
    s.response_time = s.queue_length / lambda;
    s.p_empty = p0;
    const double log_a = std::log(a);
    const double log_p0 = std::log(p0);
    for (std::size_t state : k) {
        const double kd = static_cast<double>(state);
        const double log_pk = state <= m ? log_p0 + kd * log_a - std::lgamma(kd + 1.0)
                                         : log_p0 + md * log_a - std::lgamma(md + 1.0) + (kd - md) * std::log(rho);
        s.marginals.push_back(std::exp(log_pk));
    }
    return s;
}

/// M/M/inf (delay center). Always stable; utilization is the traffic
/// intensity lambda/mu and may exceed one.
inline StationMetrics mminf(double lambda, double mu, const StateList& k = {})
{
    detail::require_rate(lambda, "lambda");
    detail::require_rate(mu, "mu");
    const double a = lambda / mu;
    StationMetrics s;
    s.utilization = a;
    s.queue_length = a;
    s.response_time = 1.0 / mu;
    s.throughput = lambda;
    s.p_empty = std::exp(-a);
    const double log_a = std::log(a);
    for (std::size_t state : k) {
        const double kd = static_cast<double>(state);
        s.marginals.push_back(std::exp(-a + kd * log_a - std::lgamma(kd + 1.0)));
    }
    return s;
}

/// M/M/m/K finite-capacity queue, solved as the birth-death chain on
/// 0..K with birth lambda and death min(i, m) mu.
inline StationMetrics mmmk(double lambda, double mu, std::size_t m, std::size_t capacity, const StateList& k = {})
{
    detail::require_rate(lambda, "lambda");
    detail::require_rate(mu, "mu");
    if (m < 1)
        fail(errc::invalid_server_count, "M/M/m/K requires at least one server");
    if (capacity < m)
        fail(errc::invalid_capacity, "capacity K=" + std::to_string(capacity) + " is below the server count m="
                                         + std::to_string(m));

    // Log weights keep heavy-traffic chains with large K finite.
    std::vector<double> pi(capacity + 1, 0.0);
    for (std::size_t i = 1; i <= capacity; ++i)
        pi[i] = pi[i - 1] + std::log(lambda / (static_cast<double>(std::min(i, m)) * mu));
    const double top = *std::max_element(pi.begin(), pi.end());
    double norm = 0.0;
    for (double& w : pi)
        norm += w = std::exp(w - top);
    for (double& w : pi)
        w /= norm;

    StationMetrics s;
    double busy = 0.0;
    for (std::size_t i = 0; i <= capacity; ++i) {
        s.queue_length += static_cast<double>(i) * pi[i];
        busy += static_cast<double>(std::min(i, m)) * pi[i];
    }
    s.p_empty = pi.front();
    s.p_full = pi.back();
    s.throughput = lambda * (1.0 - pi.back());
    s.utilization = busy / static_cast<double>(m);
    s.response_time = s.queue_length / s.throughput;
    for (std::size_t state : k)
        s.marginals.push_back(state <= capacity ? pi[state] : 0.0);
    return s;
}

/// M/M/1/K finite-capacity queue.
inline StationMetrics mm1k(double lambda, double mu, std::size_t capacity, const StateList& k = {})
{
    if (capacity < 1)
        fail(errc::invalid_capacity, "M/M/1/K requires K >= 1");
    return mmmk(lambda, mu, 1, capacity, k);
}

} // namespace qnkit::stations
