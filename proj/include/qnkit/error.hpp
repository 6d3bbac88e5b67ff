#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnkit {

/// Failure categories reported by every solver in the library.
enum class errc {
    invalid_matrix,
    invalid_probability_vector,
    non_unique_stationary,
    dimension_mismatch,
    no_absorbing_state,
    singular_fundamental_matrix,
    reducible_chain,
    invalid_rates,
    invalid_parameter,
    unstable,
    invalid_server_count,
    invalid_capacity,
    invalid_phases,
    unsupported_metric,
    singular_routing,
    reducible_routing,
    invalid_model,
    class_dependent_fcfs_service,
    capacity_exceeded,
    no_convergence,
    division_by_zero,
    parse_error,
    schema_error,
    validation_error,
};

constexpr std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::invalid_matrix: return "InvalidMatrix";
    case errc::invalid_probability_vector: return "InvalidProbabilityVector";
    case errc::non_unique_stationary: return "NonUniqueStationary";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::no_absorbing_state: return "NoAbsorbingState";
    case errc::singular_fundamental_matrix: return "SingularFundamentalMatrix";
    case errc::reducible_chain: return "ReducibleChain";
    case errc::invalid_rates: return "InvalidRates";
    case errc::invalid_parameter: return "InvalidParameter";
    case errc::unstable: return "Unstable";
    case errc::invalid_server_count: return "InvalidServerCount";
    case errc::invalid_capacity: return "InvalidCapacity";
    case errc::invalid_phases: return "InvalidPhases";
    case errc::unsupported_metric: return "UnsupportedMetric";
    case errc::singular_routing: return "SingularRouting";
    case errc::reducible_routing: return "ReducibleRouting";
    case errc::invalid_model: return "InvalidModel";
    case errc::class_dependent_fcfs_service: return "ClassDependentFcfsService";
    case errc::capacity_exceeded: return "CapacityExceeded";
    case errc::no_convergence: return "NoConvergence";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::parse_error: return "ParseError";
    case errc::schema_error: return "SchemaError";
    case errc::validation_error: return "ValidationError";
    }
    return "Unknown";
}

/// Process exit status for a failure: 1 bad input, 2 unstable model,
/// 3 numerical failure (singular system, no convergence, resource limit).
constexpr int exit_code(errc code) noexcept
{
    switch (code) {
    case errc::unstable:
        return 2;
    case errc::non_unique_stationary:
    case errc::singular_fundamental_matrix:
    case errc::reducible_chain:
    case errc::singular_routing:
    case errc::reducible_routing:
    case errc::capacity_exceeded:
    case errc::no_convergence:
    case errc::division_by_zero:
        return 3;
    default:
        return 1;
    }
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what)
    {}

    errc code() const noexcept { return code_; }

    /// Message without the category prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    errc code_;
    std::string detail_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace qnkit
