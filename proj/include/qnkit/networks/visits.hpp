#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/linalg.hpp"

namespace qnkit::networks {

/// Tolerance on routing-matrix row sums.
inline constexpr double routing_tolerance = 1e-9;

namespace detail {

inline Matrix checked_routing(Matrix p, bool closed)
{
    if (!p.square() || p.rows() == 0)
        fail(errc::invalid_matrix, "routing matrix must be square and non-empty");
    for (std::size_t i = 0; i < p.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.cols(); ++j) {
            double& v = p(i, j);
            if (v < 0.0 && v >= -1e-12)
                v = 0.0;
            if (!(v >= 0.0) || !std::isfinite(v))
                fail(errc::invalid_matrix, "negative routing probability at row " + std::to_string(i));
            s += v;
        }
        if (closed ? std::abs(s - 1.0) > routing_tolerance : s > 1.0 + routing_tolerance)
            fail(errc::invalid_matrix, "routing row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
    return p;
}

inline std::vector<char> reachable(const Matrix& p, std::size_t from, bool reverse)
{
    std::vector<char> seen(p.rows(), 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < p.rows(); ++j) {
            const double w = reverse ? p(j, i) : p(i, j);
            if (w > 0.0 && !seen[j]) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

} // namespace detail

/// Visit ratios of an open network: V_i = P0_i + sum_j V_j P[j][i] with
/// P0_i = lambda_i / sum(lambda). Row deficits of P are exit probabilities.
inline Vector visits_open(const Matrix& routing, std::span<const double> external)
{
    Matrix p = detail::checked_routing(routing, false);
    const std::size_t k = p.rows();
    if (external.size() != k)
        fail(errc::dimension_mismatch, "external arrival vector must have one entry per center");
    double total = 0.0;
    for (double l : external) {
        if (!(l >= 0.0) || !std::isfinite(l))
            fail(errc::invalid_parameter, "external arrival rates must be finite and non-negative");
        total += l;
    }
    if (!(total > 0.0))
        fail(errc::invalid_parameter, "total external arrival rate must be positive");

    // (I - P)^T V = P0
    Matrix a(k, k);
    Vector rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        rhs[i] = external[i] / total;
        for (std::size_t j = 0; j < k; ++j)
            a(i, j) = (i == j ? 1.0 : 0.0) - p(j, i);
    }
    auto v = solve_linear(std::move(a), std::move(rhs));
    if (!v)
        fail(errc::singular_routing, "some set of centers has no exit; visit ratios are unbounded");
    for (double& x : *v) {
        if (x < 0.0 && x > -1e-12)
            x = 0.0;
        if (!(x >= 0.0) || !std::isfinite(x))
            fail(errc::singular_routing, "routing matrix is numerically singular");
    }
    return *v;
}

/// Visit ratios of a closed network: V = V P with V[reference] = 1.
inline Vector visits_closed(const Matrix& routing, std::size_t reference = 0)
{
    Matrix p = detail::checked_routing(routing, true);
    const std::size_t k = p.rows();
    if (reference >= k)
        fail(errc::invalid_parameter, "reference station " + std::to_string(reference) + " out of range");
    const auto fwd = detail::reachable(p, reference, false);
    const auto back = detail::reachable(p, reference, true);
    for (std::size_t i = 0; i < k; ++i)
        if (!fwd[i] || !back[i])
            fail(errc::reducible_routing, "center " + std::to_string(i) + " is not in the reference station's class");

    // (P^T - I) V = 0 with the reference row replaced by V_r = 1.
    Matrix a(k, k);
    Vector rhs(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < k; ++j)
        a(reference, j) = (j == reference) ? 1.0 : 0.0;
    rhs[reference] = 1.0;
    auto v = solve_linear(std::move(a), std::move(rhs));
    if (!v)
        fail(errc::reducible_routing, "visit-ratio equations are singular");
    return *v;
}

} // namespace qnkit::networks
