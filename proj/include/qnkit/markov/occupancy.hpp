#pragma once

#include <cmath>
#include <cstdint>

#include "qnkit/markov/types.hpp"

namespace qnkit::markov {

/// Poisson tail mass discarded by uniformization.
inline constexpr double uniformization_tail = 1e-12;

namespace detail {

/// Solves pi * A = 0 with the last balance equation replaced by sum(pi) = 1.
inline std::vector<double> stationary_from_balance(const Matrix& a)
{
    const std::size_t n = a.rows();
    Matrix system = transpose(a);
    for (std::size_t j = 0; j < n; ++j)
        system(n - 1, j) = 1.0;
    Vector rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    auto pi = solve_linear(std::move(system), std::move(rhs));
    if (!pi)
        fail(errc::non_unique_stationary, "balance equations are rank deficient (more than one recurrent class)");
    for (double& v : *pi) {
        if (v < 0.0 && v > -1e-10)
            v = 0.0;
    }
    return *pi;
}

/// Result of evaluating the uniformization series.
struct UniformizationResult {
    std::vector<double> occupancy; ///< p0 * exp(Q t)
    std::vector<double> integral;  ///< integral_0^t p0 * exp(Q u) du
    std::size_t terms = 0;
};

/// Evaluates the uniformization series for p0 * exp(Q t) and, when
/// requested, its time integral.
///
/// With L = max_i(-q_ii) and P = I + Q/L,
///   pi(t)            = sum_k poisson(k; Lt) p0 P^k
///   int_0^t pi(u) du = (1/L) sum_k P[Poisson(Lt) > k] p0 P^k
/// The series stops once the cumulative Poisson weight reaches 1 - 1e-12.
inline UniformizationResult uniformize(const GeneratorMatrix& q, std::span<const double> p0, double t,
                                       bool with_integral)
{
    const std::size_t n = q.size();
    UniformizationResult out;
    const double rate = q.max_exit_rate();
    if (rate == 0.0 || t == 0.0) {
        out.occupancy.assign(p0.begin(), p0.end());
        out.integral.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            out.integral[i] = p0[i] * t;
        return out;
    }

    Matrix pu = q.matrix();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            pu(i, j) /= rate;
        pu(i, i) += 1.0;
    }

    const double mean = rate * t;
    const double log_mean = std::log(mean);
    // Beyond this many terms the tail is negligible even allowing for
    // round-off in the cumulative sum.
    const auto max_terms = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 200.0);

    std::vector<double> v(p0.begin(), p0.end());
    out.occupancy.assign(n, 0.0);
    if (with_integral)
        out.integral.assign(n, 0.0);

    double cumulative = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        const double w = std::exp(-mean + kd * log_mean - std::lgamma(kd + 1.0));
        cumulative += w;
        for (std::size_t i = 0; i < n; ++i)
            out.occupancy[i] += w * v[i];
        if (with_integral) {
            const double tail = std::max(0.0, 1.0 - cumulative) / rate;
            for (std::size_t i = 0; i < n; ++i)
                out.integral[i] += tail * v[i];
        }
        out.terms = k + 1;
        if (cumulative >= 1.0 - uniformization_tail || k >= max_terms)
            break;
        v = left_multiply(v, pu);
    }
    return out;
}

} // namespace detail

/// Stationary distribution of a DTMC: pi P = pi, sum(pi) = 1.
inline ProbabilityVector dtmc_solve(const TransitionMatrix& p)
{
    const std::size_t n = p.size();
    if (n == 0)
        fail(errc::invalid_matrix, "empty transition matrix");
    Matrix a = p.matrix();
    for (std::size_t i = 0; i < n; ++i)
        a(i, i) -= 1.0;
    return ProbabilityVector::unchecked(detail::stationary_from_balance(a));
}

/// Occupancy after `steps` transitions: p0 * P^steps.
inline ProbabilityVector dtmc_solve(const TransitionMatrix& p, std::uint64_t steps, const ProbabilityVector& p0)
{
    require_same_size(p.size(), p0);
    std::vector<double> v = p0.values();
    constexpr std::uint64_t direct_limit = 1024;
    if (steps <= direct_limit) {
        for (std::uint64_t k = 0; k < steps; ++k)
            v = left_multiply(v, p.matrix());
        return ProbabilityVector::unchecked(std::move(v));
    }
    Matrix base = p.matrix();
    while (steps > 0) {
        if (steps & 1u)
            v = left_multiply(v, base);
        steps >>= 1u;
        if (steps > 0)
            base = multiply(base, base);
    }
    return ProbabilityVector::unchecked(std::move(v));
}

/// Stationary distribution of a CTMC: pi Q = 0, sum(pi) = 1.
inline ProbabilityVector ctmc_solve(const GeneratorMatrix& q)
{
    if (q.size() == 0)
        fail(errc::invalid_matrix, "empty generator matrix");
    return ProbabilityVector::unchecked(detail::stationary_from_balance(q.matrix()));
}

/// Transient occupancy at time t: p0 * exp(Q t), by uniformization.
inline ProbabilityVector ctmc_solve(const GeneratorMatrix& q, double t, const ProbabilityVector& p0)
{
    require_same_size(q.size(), p0);
    if (!(t >= 0.0) || !std::isfinite(t))
        fail(errc::invalid_parameter, "horizon must be a finite non-negative time");
    return ProbabilityVector::unchecked(detail::uniformize(q, p0.span(), t, false).occupancy);
}

} // namespace qnkit::markov
