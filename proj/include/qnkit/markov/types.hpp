#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/linalg.hpp"

namespace qnkit::markov {

/// Row sums of a stochastic matrix must equal one within this bound.
inline constexpr double row_sum_tolerance = 1e-8;
/// Entries in [-clamp_tolerance, 0) are treated as round-off and zeroed.
inline constexpr double clamp_tolerance = 1e-12;
/// A DTMC state is absorbing when its self-loop probability reaches 1 - this.
inline constexpr double dtmc_absorbing_tolerance = 1e-10;
/// A CTMC state is absorbing when every rate in its row is at most this.
inline constexpr double ctmc_absorbing_tolerance = 1e-12;

namespace detail {

inline std::string cell(std::size_t i, std::size_t j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

inline void clamp_round_off(double& v)
{
    if (v < 0.0 && v >= -clamp_tolerance)
        v = 0.0;
}

} // namespace detail

/// Stochastic matrix of a discrete-time chain.
class TransitionMatrix {
public:
    explicit TransitionMatrix(Matrix p) : p_(std::move(p))
    {
        if (!p_.square())
            fail(errc::invalid_matrix, "transition matrix must be square");
        const std::size_t n = p_.rows();
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double& v = p_(i, j);
                detail::clamp_round_off(v);
                if (!std::isfinite(v) || v < 0.0)
                    fail(errc::invalid_matrix, "negative or non-finite probability at " + detail::cell(i, j));
                s += v;
            }
            if (std::abs(s - 1.0) > row_sum_tolerance)
                fail(errc::invalid_matrix, "row " + std::to_string(i) + " sums to " + std::to_string(s));
        }
    }

    std::size_t size() const noexcept { return p_.rows(); }
    const Matrix& matrix() const noexcept { return p_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return p_(i, j); }

    bool is_absorbing(std::size_t i) const noexcept { return p_(i, i) >= 1.0 - dtmc_absorbing_tolerance; }

private:
    Matrix p_;
};

/// Infinitesimal generator of a continuous-time chain.
class GeneratorMatrix {
public:
    explicit GeneratorMatrix(Matrix q) : q_(std::move(q))
    {
        if (!q_.square())
            fail(errc::invalid_matrix, "generator matrix must be square");
        const std::size_t n = q_.rows();
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            double magnitude = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double& v = q_(i, j);
                if (i != j)
                    detail::clamp_round_off(v);
                if (!std::isfinite(v) || (i != j && v < 0.0))
                    fail(errc::invalid_matrix, "negative or non-finite rate at " + detail::cell(i, j));
                s += v;
                magnitude = std::max(magnitude, std::abs(v));
            }
            if (std::abs(s) > row_sum_tolerance * std::max(1.0, magnitude))
                fail(errc::invalid_matrix, "row " + std::to_string(i) + " sums to " + std::to_string(s));
        }
    }

    std::size_t size() const noexcept { return q_.rows(); }
    const Matrix& matrix() const noexcept { return q_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return q_(i, j); }

    bool is_absorbing(std::size_t i) const noexcept
    {
        for (double v : q_.row(i))
            if (std::abs(v) > ctmc_absorbing_tolerance)
                return false;
        return true;
    }

    /// Largest exit rate, max_i(-q_ii).
    double max_exit_rate() const noexcept
    {
        double r = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            r = std::max(r, -q_(i, i));
        return r;
    }

private:
    Matrix q_;
};

/// State occupancy probabilities.
class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> p) : p_(std::move(p))
    {
        double s = 0.0;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            detail::clamp_round_off(p_[i]);
            if (!std::isfinite(p_[i]) || p_[i] < 0.0)
                fail(errc::invalid_probability_vector, "entry " + std::to_string(i) + " is negative");
            s += p_[i];
        }
        if (std::abs(s - 1.0) > row_sum_tolerance)
            fail(errc::invalid_probability_vector, "entries sum to " + std::to_string(s));
    }

    /// Wraps a solver result without re-validating it.
    static ProbabilityVector unchecked(std::vector<double> p)
    {
        ProbabilityVector v;
        v.p_ = std::move(p);
        return v;
    }

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const noexcept { return p_[i]; }
    const std::vector<double>& values() const noexcept { return p_; }
    std::span<const double> span() const noexcept { return p_; }

private:
    ProbabilityVector() = default;
    std::vector<double> p_;
};

/// Birth values b_1..b_N (state i -> i+1) and death values d_1..d_N
/// (state i+1 -> i) of an (N+1)-state birth-death chain.
struct BirthDeathRates {
    std::vector<double> birth;
    std::vector<double> death;
};

/// m(i,j): mean first passage time from i to j; m(j,j): mean recurrence time.
using PassageTimeMatrix = Matrix;

/// Expected visits (DTMC) or expected time (CTMC) per state.
using SojournVector = std::vector<double>;

inline void require_same_size(std::size_t states, const ProbabilityVector& p0)
{
    if (p0.size() != states)
        fail(errc::dimension_mismatch, "initial vector has " + std::to_string(p0.size()) + " entries, chain has "
                                           + std::to_string(states) + " states");
}

} // namespace qnkit::markov
