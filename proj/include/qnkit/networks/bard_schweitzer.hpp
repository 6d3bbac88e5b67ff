#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/networks/model.hpp"
#include "qnkit/networks/solution.hpp"

namespace qnkit::networks {

struct BardSchweitzerOptions {
    double tol = 1e-7;
    std::size_t max_iter = 100000;
};

/// Thrown when the fixed point is not reached; carries the last iterate.
class no_convergence_error : public error {
public:
    no_convergence_error(std::string detail, NetworkSolution last)
        : error(errc::no_convergence, std::move(detail)), last_(std::move(last))
    {
    }
    const NetworkSolution& last_iterate() const noexcept { return last_; }

private:
    NetworkSolution last_;
};

/// Bard-Schweitzer approximate MVA: Q[d][i](N - 1_c) is estimated as
/// Q[d][i](N) scaled by (N_c - 1)/N_c for d = c. Storage is O(CK).
inline NetworkSolution solve_closed_multi_bs(const NetworkModel& m, const BardSchweitzerOptions& options = {})
{
    validate(m);
    require_kind(m, NetworkKind::closed);
    const std::size_t classes = m.classes();
    const std::size_t centers = m.centers();
    for (std::size_t i = 0; i < centers; ++i)
        if (m.is_load_dependent(i) || (!m.is_delay(i) && m.servers_at(i).count() != 1))
            fail(errc::invalid_model, "Bard-Schweitzer supports single-server and delay centers only (center "
                                          + std::to_string(i) + ")");
    if (!(options.tol > 0.0))
        fail(errc::invalid_parameter, "tolerance must be positive");

    std::vector<double> q(classes * centers);
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < centers; ++i)
            q[c * centers + i] = static_cast<double>(m.population[c]) / static_cast<double>(centers);
    std::vector<double> r(classes * centers, 0.0);
    std::vector<double> x(classes, 0.0);
    std::vector<double> total(centers, 0.0);

    double residual = 0.0;
    std::size_t iter = 0;
    bool converged = false;
    while (iter < options.max_iter) {
        ++iter;
        for (std::size_t i = 0; i < centers; ++i) {
            total[i] = 0.0;
            for (std::size_t c = 0; c < classes; ++c)
                total[i] += q[c * centers + i];
        }
        for (std::size_t c = 0; c < classes; ++c) {
            const double nc = static_cast<double>(m.population[c]);
            double cycle = m.think(c);
            for (std::size_t i = 0; i < centers; ++i) {
                const double s = m.service(c, i);
                double rci = s;
                if (!m.is_delay(i) && nc > 0.0)
                    rci = s * (1.0 + total[i] - q[c * centers + i] / nc);
                r[c * centers + i] = rci;
                cycle += m.visits(c, i) * rci;
            }
            if (nc == 0.0)
                x[c] = 0.0;
            else if (!(cycle > 0.0))
                fail(errc::invalid_model, "class " + std::to_string(c) + " has zero cycle time");
            else
                x[c] = nc / cycle;
        }
        residual = 0.0;
        for (std::size_t c = 0; c < classes; ++c)
            for (std::size_t i = 0; i < centers; ++i) {
                const double next = x[c] * m.visits(c, i) * r[c * centers + i];
                residual = std::max(residual, std::abs(next - q[c * centers + i]));
                q[c * centers + i] = next;
            }
        if (residual < options.tol) {
            converged = true;
            break;
        }
    }

    auto sol = NetworkSolution::zeros(classes, centers);
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < centers; ++i) {
            const double xci = x[c] * m.visits(c, i);
            sol.throughput(c, i) = xci;
            sol.utilization(c, i) = xci * m.service(c, i);
            sol.response_time(c, i) = r[c * centers + i];
            sol.queue_length(c, i) = q[c * centers + i];
        }
    aggregate(sol, m.visits);
    sol.approximate = true;
    sol.iterations = iter;
    sol.residual = residual;
    if (!converged)
        throw no_convergence_error("no fixed point after " + std::to_string(iter) + " iterations (residual "
                                       + std::to_string(residual) + ")",
                                   std::move(sol));
    return sol;
}

} // namespace qnkit::networks
