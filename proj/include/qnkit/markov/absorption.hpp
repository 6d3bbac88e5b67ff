#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnkit/markov/occupancy.hpp"

namespace qnkit::markov {

namespace detail {

/// Transient states reachable from the support of p0 without passing
/// through an absorbing state, in increasing index order.
template <class Chain>
std::vector<std::size_t> reachable_transient(const Chain& chain, const ProbabilityVector& p0)
{
    const std::size_t n = chain.size();
    std::vector<char> absorbing(n), seen(n, 0);
    bool any_absorbing = false;
    for (std::size_t i = 0; i < n; ++i) {
        absorbing[i] = chain.is_absorbing(i);
        any_absorbing = any_absorbing || absorbing[i];
    }
    if (!any_absorbing)
        fail(errc::no_absorbing_state, "chain has no absorbing state");

    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i)
        if (p0[i] > 0.0 && !absorbing[i]) {
            seen[i] = 1;
            stack.push_back(i);
        }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && chain(i, j) > 0.0 && !absorbing[j] && !seen[j]) {
                seen[j] = 1;
                stack.push_back(j);
            }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (seen[i])
            out.push_back(i);
    return out;
}

/// Solves y * A_t = p0_t, where A_t is `transient_block` restricted to
/// the reachable transient states; y is scattered back to full length.
/// For a DTMC A = I - P, for a CTMC A = -Q.
template <class Chain, class Block>
std::vector<double> expected_before_absorption(const Chain& chain, const ProbabilityVector& p0, Block transient_block)
{
    require_same_size(chain.size(), p0);
    const auto states = reachable_transient(chain, p0);
    std::vector<double> full(chain.size(), 0.0);
    if (states.empty())
        return full;

    const std::size_t m = states.size();
    Matrix a(m, m);
    Vector rhs(m);
    for (std::size_t r = 0; r < m; ++r) {
        rhs[r] = p0[states[r]];
        for (std::size_t c = 0; c < m; ++c)
            a(c, r) = transient_block(states[r], states[c]); // transposed
    }
    auto y = solve_linear(std::move(a), std::move(rhs));
    if (!y)
        fail(errc::singular_fundamental_matrix, "some transient states cannot reach an absorbing state");
    for (std::size_t r = 0; r < m; ++r) {
        if (!((*y)[r] > -1e-9) || !std::isfinite((*y)[r]))
            fail(errc::singular_fundamental_matrix, "fundamental matrix is numerically singular");
        full[states[r]] = std::max(0.0, (*y)[r]);
    }
    return full;
}

inline std::vector<double> dtmc_visits_before_absorption(const TransitionMatrix& p, const ProbabilityVector& p0)
{
    return expected_before_absorption(p, p0, [&](std::size_t i, std::size_t j) {
        return (i == j ? 1.0 : 0.0) - p(i, j);
    });
}

inline std::vector<double> ctmc_time_before_absorption(const GeneratorMatrix& q, const ProbabilityVector& p0)
{
    return expected_before_absorption(q, p0, [&](std::size_t i, std::size_t j) { return -q(i, j); });
}

} // namespace detail

/// Mean number of steps before entering an absorbing state,
/// p0_t * N * 1 with N = (I - P_t)^-1.
inline double dtmc_mtta(const TransitionMatrix& p, const ProbabilityVector& p0)
{
    return sum(detail::dtmc_visits_before_absorption(p, p0));
}

/// Mean time to absorption, p0_t * (-Q_t)^-1 * 1.
inline double ctmc_mtta(const GeneratorMatrix& q, const ProbabilityVector& p0)
{
    return sum(detail::ctmc_time_before_absorption(q, p0));
}

/// Expected visits to each state. With a horizon n, visits at steps
/// 0..n-1 are counted (so the entries sum to n); `time_averaged`
/// divides by n. Without a horizon, expected visits to transient states
/// before absorption; absorbing states report 0.
inline SojournVector dtmc_exps(const TransitionMatrix& p, const ProbabilityVector& p0,
                               std::optional<std::uint64_t> horizon = std::nullopt, bool time_averaged = false)
{
    require_same_size(p.size(), p0);
    if (!horizon) {
        if (time_averaged)
            fail(errc::invalid_parameter, "time-averaged sojourn times require a horizon");
        return detail::dtmc_visits_before_absorption(p, p0);
    }
    if (time_averaged && *horizon == 0)
        fail(errc::invalid_parameter, "time-averaged sojourn times require a positive horizon");
    SojournVector l(p.size(), 0.0);
    std::vector<double> v = p0.values();
    for (std::uint64_t k = 0; k < *horizon; ++k) {
        for (std::size_t i = 0; i < l.size(); ++i)
            l[i] += v[i];
        if (k + 1 < *horizon)
            v = left_multiply(v, p.matrix());
    }
    if (time_averaged)
        for (double& x : l)
            x /= static_cast<double>(*horizon);
    return l;
}

/// Expected time spent in each state. With a horizon t, the integral of
/// the transient occupancy over [0, t]; `time_averaged` divides by t.
/// Without a horizon, expected time in transient states before
/// absorption; absorbing states report 0.
inline SojournVector ctmc_exps(const GeneratorMatrix& q, const ProbabilityVector& p0,
                               std::optional<double> horizon = std::nullopt, bool time_averaged = false)
{
    require_same_size(q.size(), p0);
    if (!horizon) {
        if (time_averaged)
            fail(errc::invalid_parameter, "time-averaged sojourn times require a horizon");
        return detail::ctmc_time_before_absorption(q, p0);
    }
    const double t = *horizon;
    if (!(t >= 0.0) || !std::isfinite(t))
        fail(errc::invalid_parameter, "horizon must be a finite non-negative time");
    if (time_averaged && t == 0.0)
        fail(errc::invalid_parameter, "time-averaged sojourn times require a positive horizon");
    SojournVector l = detail::uniformize(q, p0.span(), t, true).integral;
    if (time_averaged)
        for (double& x : l)
            x /= t;
    return l;
}

} // namespace qnkit::markov
