#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qnkit/error.hpp"

namespace qnkit::stations {

/// Steady-state measures of a single service center.
struct StationMetrics {
    double utilization = 0.0;   ///< per-server busy fraction; traffic intensity for M/M/inf
    double response_time = 0.0; ///< mean time in system
    double queue_length = 0.0;  ///< mean number in system
    double throughput = 0.0;
    double p_empty = 0.0;              ///< probability the system is empty
    std::optional<double> p_full;      ///< rejection probability (finite capacity only)
    std::vector<double> marginals;     ///< pi_k for each requested k, in request order
    bool approximate = false;

    friend bool operator==(const StationMetrics&, const StationMetrics&) = default;
};

using StateList = std::vector<std::size_t>;

namespace detail {

inline void require_rate(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        fail(errc::invalid_parameter, std::string(name) + " must be a finite positive rate");
}

inline void require_stable(double rho, const std::string& what)
{
    if (!(rho < 1.0))
        fail(errc::unstable, what + " (utilization " + std::to_string(rho) + " >= 1)");
}

inline void reject_marginals(const StateList& k, const char* system)
{
    if (!k.empty())
        fail(errc::unsupported_metric, std::string("state probabilities are not available for ") + system);
}

} // namespace detail

/// sum_{k=0}^{n} a^k / k!, evaluated as 1 + a(1 + a/2(1 + ... (1 + a/n))).
inline double truncated_exp_sum(double a, std::size_t n) noexcept
{
    double s = 1.0;
    for (std::size_t k = n; k >= 1; --k)
        s = 1.0 + a / static_cast<double>(k) * s;
    return s;
}

} // namespace qnkit::stations
