#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qnkit/stations/metrics.hpp"

namespace qnkit::stations {

/// M/G/1 queue via Pollaczek-Khinchine. The service distribution is given
/// by its mean and squared coefficient of variation (E[S^2] = mean^2 (1 + scv)).
inline StationMetrics mg1(double lambda, double mean_service, double scv, const StateList& k = {})
{
    detail::reject_marginals(k, "M/G/1");
    detail::require_rate(lambda, "lambda");
    if (!(mean_service > 0.0) || !std::isfinite(mean_service))
        fail(errc::invalid_parameter, "mean service time must be finite and positive");
    if (!(scv >= 0.0) || !std::isfinite(scv))
        fail(errc::invalid_parameter, "squared coefficient of variation must be finite and non-negative");
    const double rho = lambda * mean_service;
    detail::require_stable(rho, "M/G/1 requires lambda * E[S] < 1");
    StationMetrics s;
    s.utilization = rho;
    s.queue_length = rho + rho * rho * (1.0 + scv) / (2.0 * (1.0 - rho));
    s.throughput = lambda;
    s.response_time = s.queue_length / lambda;
    s.p_empty = 1.0 - rho;
    return s;
}

namespace detail {

struct Moments {
    double mean;
    double second;
};

/// First two moments of a hyperexponential with phase rates `mu` chosen
/// with probabilities `alpha`.
inline Moments hyperexponential_moments(std::span<const double> mu, std::span<const double> alpha)
{
    if (mu.empty() || mu.size() != alpha.size())
        fail(errc::invalid_phases, "phase rates and probabilities must be non-empty and of equal length");
    double total = 0.0;
    Moments m{0.0, 0.0};
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] > 0.0) || !std::isfinite(mu[i]))
            fail(errc::invalid_phases, "phase rate " + std::to_string(i) + " must be finite and positive");
        if (!(alpha[i] >= 0.0))
            fail(errc::invalid_phases, "phase probability " + std::to_string(i) + " is negative");
        total += alpha[i];
        m.mean += alpha[i] / mu[i];
        m.second += 2.0 * alpha[i] / (mu[i] * mu[i]);
    }
    if (std::abs(total - 1.0) > 1e-9)
        fail(errc::invalid_phases, "phase probabilities sum to " + std::to_string(total));
    return m;
}

} // namespace detail

/// M/H_m/1 queue with hyperexponential service, reduced to M/G/1.
inline StationMetrics mh1(double lambda, std::span<const double> mu, std::span<const double> alpha,
                          const StateList& k = {})
{
    detail::reject_marginals(k, "M/H/1");
    const auto m = detail::hyperexponential_moments(mu, alpha);
    const double scv = std::max(0.0, m.second / (m.mean * m.mean) - 1.0);
    return mg1(lambda, m.mean, scv);
}

/// Asymmetric M/M/m with per-server rates `mu`, approximated by a single
/// M/G/1 server. The surrogate server works at the pooled rate sum(mu);
/// the variability of its service is that of an equiprobable mixture over
/// the individual servers. The result is flagged approximate.
inline StationMetrics ammm(double lambda, std::span<const double> mu, const StateList& k = {})
{
    detail::reject_marginals(k, "asymmetric M/M/m");
    detail::require_rate(lambda, "lambda");
    if (mu.empty())
        fail(errc::invalid_server_count, "asymmetric M/M/m requires at least one server");
    double pooled = 0.0;
    for (double r : mu) {
        detail::require_rate(r, "server rate");
        pooled += r;
    }
    detail::require_stable(lambda / pooled, "asymmetric M/M/m requires lambda < sum(mu)");

    const std::vector<double> alpha(mu.size(), 1.0 / static_cast<double>(mu.size()));
    const auto mix = detail::hyperexponential_moments(mu, alpha);
    const double scv = std::max(0.0, mix.second / (mix.mean * mix.mean) - 1.0);
    StationMetrics s = mg1(lambda, 1.0 / pooled, scv);
    s.approximate = true;
    return s;
}

} // namespace qnkit::stations
