#pragma once

#include <string>

#include "qnkit/markov/types.hpp"

namespace qnkit::markov {

namespace detail {

inline void check_rates(const BirthDeathRates& rates)
{
    if (rates.birth.size() != rates.death.size())
        fail(errc::invalid_rates, "birth and death vectors differ in length");
    for (std::size_t i = 0; i < rates.birth.size(); ++i) {
        if (!(rates.birth[i] >= 0.0) || !std::isfinite(rates.birth[i]))
            fail(errc::invalid_rates, "birth[" + std::to_string(i) + "] must be a finite non-negative value");
        if (!(rates.death[i] >= 0.0) || !std::isfinite(rates.death[i]))
            fail(errc::invalid_rates, "death[" + std::to_string(i) + "] must be a finite non-negative value");
    }
}

} // namespace detail

/// Tridiagonal stochastic matrix of a discrete birth-death chain.
inline TransitionMatrix dtmc_bd(const BirthDeathRates& rates)
{
    detail::check_rates(rates);
    const std::size_t n = rates.birth.size() + 1;
    Matrix p(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        p(i, i + 1) = rates.birth[i];
        p(i + 1, i) = rates.death[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double out = (i + 1 < n ? p(i, i + 1) : 0.0) + (i > 0 ? p(i, i - 1) : 0.0);
        if (out > 1.0 + row_sum_tolerance)
            fail(errc::invalid_rates, "outgoing probability of state " + std::to_string(i) + " exceeds 1");
        p(i, i) = std::max(0.0, 1.0 - out);
    }
    return TransitionMatrix(std::move(p));
}

/// Tridiagonal generator of a continuous birth-death chain.
inline GeneratorMatrix ctmc_bd(const BirthDeathRates& rates)
{
    detail::check_rates(rates);
    const std::size_t n = rates.birth.size() + 1;
    Matrix q(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        q(i, i + 1) = rates.birth[i];
        q(i + 1, i) = rates.death[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        double out = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                out += q(i, j);
        q(i, i) = -out;
    }
    return GeneratorMatrix(std::move(q));
}

} // namespace qnkit::markov
