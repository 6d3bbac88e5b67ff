#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/linalg.hpp"

namespace qnkit::networks {

/// Per-class, per-center measures (C x K matrices) plus system aggregates.
/// Response times are per visit; a class's system response time is
/// sum_i R[c][i] V[c][i].
struct NetworkSolution {
    Matrix utilization;
    Matrix response_time;
    Matrix queue_length;
    Matrix throughput;

    std::vector<double> class_throughput;
    std::vector<double> class_response_time;
    std::vector<double> class_queue_length;

    double system_throughput = 0.0;
    double system_response_time = 0.0;
    double system_queue_length = 0.0;

    std::optional<double> normalization_constant;     ///< G(N), convolution only
    std::optional<double> log_normalization_constant; ///< ln G(N), convolution only
    bool approximate = false;
    std::optional<std::size_t> iterations;
    std::optional<double> residual;
    /// Load-dependent and multi-server centers: marginals[i][j] = p_i(j | N).
    std::vector<std::vector<double>> marginals;
    std::vector<std::string> warnings;

    static NetworkSolution zeros(std::size_t classes, std::size_t centers)
    {
        NetworkSolution s;
        s.utilization = Matrix(classes, centers);
        s.response_time = Matrix(classes, centers);
        s.queue_length = Matrix(classes, centers);
        s.throughput = Matrix(classes, centers);
        return s;
    }

    std::size_t classes() const noexcept { return utilization.rows(); }
    std::size_t centers() const noexcept { return utilization.cols(); }
};

/// Fills the per-class and system aggregates from per-center results:
/// X_c = X[c][i] / V[c][i] for the first i with V[c][i] > 0,
/// R_c = sum_i R[c][i] V[c][i], Q_c = sum_i Q[c][i], X = sum_c X_c,
/// Q = sum_c Q_c and R the throughput-weighted mean of the R_c.
inline void aggregate(NetworkSolution& s, const Matrix& visits)
{
    const std::size_t classes = s.classes();
    const std::size_t centers = s.centers();
    s.class_throughput.assign(classes, 0.0);
    s.class_response_time.assign(classes, 0.0);
    s.class_queue_length.assign(classes, 0.0);
    s.system_throughput = s.system_response_time = s.system_queue_length = 0.0;

    double weighted_response = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        std::optional<std::size_t> ref;
        for (std::size_t i = 0; i < centers && !ref; ++i)
            if (visits(c, i) > 0.0)
                ref = i;
        if (!ref)
            fail(errc::division_by_zero, "class " + std::to_string(c) + " has no center with positive visits");
        s.class_throughput[c] = s.throughput(c, *ref) / visits(c, *ref);
        for (std::size_t i = 0; i < centers; ++i) {
            s.class_response_time[c] += s.response_time(c, i) * visits(c, i);
            s.class_queue_length[c] += s.queue_length(c, i);
        }
        s.system_throughput += s.class_throughput[c];
        s.system_queue_length += s.class_queue_length[c];
        weighted_response += s.class_throughput[c] * s.class_response_time[c];
    }
    if (classes == 1)
        s.system_response_time = s.class_response_time[0];
    else if (s.system_throughput > 0.0)
        s.system_response_time = weighted_response / s.system_throughput;
}

} // namespace qnkit::networks
