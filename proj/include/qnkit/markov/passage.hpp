#pragma once

#include <string>

#include "qnkit/markov/types.hpp"

namespace qnkit::markov {

namespace detail {

/// For target j, solves  sum_{k != j} A(i,k) m_k = rhs  over i != j.
template <class Coefficient>
Vector passage_column(std::size_t n, std::size_t j, Coefficient coeff, double rhs)
{
    Matrix a(n - 1, n - 1);
    Vector b(n - 1, rhs);
    for (std::size_t i = 0, r = 0; i < n; ++i) {
        if (i == j)
            continue;
        for (std::size_t k = 0, c = 0; k < n; ++k) {
            if (k == j)
                continue;
            a(r, c++) = coeff(i, k);
        }
        ++r;
    }
    auto m = solve_linear(std::move(a), std::move(b));
    if (!m)
        fail(errc::reducible_chain, "state " + std::to_string(j) + " is not reachable from every state");
    for (double v : *m)
        if (!(v > 0.0) || !std::isfinite(v))
            fail(errc::reducible_chain, "passage time to state " + std::to_string(j) + " is not finite");
    return *m;
}

} // namespace detail

/// Mean first passage times of an irreducible DTMC (in steps).
/// Off-diagonal: m(i,j) = 1 + sum_{k != j} p(i,k) m(k,j).
/// Diagonal: mean recurrence time 1 + sum_{k != j} p(j,k) m(k,j).
inline PassageTimeMatrix dtmc_fpt(const TransitionMatrix& p)
{
    const std::size_t n = p.size();
    PassageTimeMatrix m(n, n);
    if (n == 1) {
        m(0, 0) = 1.0;
        return m;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const Vector col = detail::passage_column(
            n, j, [&](std::size_t i, std::size_t k) { return (i == k ? 1.0 : 0.0) - p(i, k); }, 1.0);
        double recurrence = 1.0;
        for (std::size_t k = 0, r = 0; k < n; ++k) {
            if (k == j)
                continue;
            m(k, j) = col[r++];
            recurrence += p(j, k) * m(k, j);
        }
        m(j, j) = recurrence;
    }
    return m;
}

/// Mean first passage times of an irreducible CTMC (in time units).
/// Off-diagonal column j solves sum_k q(i,k) m(k,j) = -1 for i != j with
/// m(j,j) = 0. The diagonal reports the mean return time
/// 1/(-q_jj) + sum_{k != j} (q_jk / -q_jj) m(k,j).
inline PassageTimeMatrix ctmc_fpt(const GeneratorMatrix& q)
{
    const std::size_t n = q.size();
    PassageTimeMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        if (!(q(j, j) < 0.0))
            fail(errc::reducible_chain, "state " + std::to_string(j) + " has no outgoing transitions");
    for (std::size_t j = 0; j < n; ++j) {
        const double exit = -q(j, j);
        double ret = 1.0 / exit;
        if (n > 1) {
            const Vector col = detail::passage_column(
                n, j, [&](std::size_t i, std::size_t k) { return -q(i, k); }, 1.0);
            for (std::size_t k = 0, r = 0; k < n; ++k) {
                if (k == j)
                    continue;
                m(k, j) = col[r++];
                ret += q(j, k) / exit * m(k, j);
            }
        }
        m(j, j) = ret;
    }
    return m;
}

} // namespace qnkit::markov
