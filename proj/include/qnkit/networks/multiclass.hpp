#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <new>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/networks/model.hpp"
#include "qnkit/networks/solution.hpp"

namespace qnkit::networks {

/// All population vectors 0 <= n <= N, stored densely by the mixed-radix
/// index sum_c n_c * stride_c.
class PopulationLattice {
public:
    explicit PopulationLattice(std::span<const std::size_t> population)
        : population_(population.begin(), population.end()), stride_(population.size())
    {
        std::uint64_t size = 1;
        for (std::size_t c = 0; c < population_.size(); ++c) {
            stride_[c] = static_cast<std::size_t>(size);
            const std::uint64_t radix = population_[c] + 1;
            size = (size > UINT64_MAX / radix) ? UINT64_MAX : size * radix;
        }
        points_ = size;
    }

    /// Number of lattice points (saturates at UINT64_MAX).
    std::uint64_t points() const noexcept { return points_; }
    std::size_t classes() const noexcept { return population_.size(); }
    std::size_t stride(std::size_t c) const noexcept { return stride_[c]; }
    std::size_t total() const noexcept { return std::accumulate(population_.begin(), population_.end(), std::size_t{0}); }

    std::size_t index(std::span<const std::size_t> n) const noexcept
    {
        std::size_t idx = 0;
        for (std::size_t c = 0; c < n.size(); ++c)
            idx += n[c] * stride_[c];
        return idx;
    }

    /// Calls f(n, index) for every point, grouped by nondecreasing total
    /// n_1 + ... + n_C. Within a level, later classes vary fastest.
    template <class F>
    void for_each_by_total(F&& f) const
    {
        std::vector<std::size_t> n(population_.size(), 0);
        // suffix[c] = sum of N_d for d >= c
        std::vector<std::size_t> suffix(population_.size() + 1, 0);
        for (std::size_t c = population_.size(); c-- > 0;)
            suffix[c] = suffix[c + 1] + population_[c];
        for (std::size_t level = 0; level <= suffix[0]; ++level)
            compose(f, n, suffix, 0, level, 0);
    }

private:
    template <class F>
    void compose(F& f, std::vector<std::size_t>& n, const std::vector<std::size_t>& suffix, std::size_t c,
                 std::size_t remaining, std::size_t idx) const
    {
        if (c + 1 == n.size()) {
            n[c] = remaining;
            f(std::as_const(n), idx + remaining * stride_[c]);
            return;
        }
        const std::size_t lo = remaining > suffix[c + 1] ? remaining - suffix[c + 1] : 0;
        const std::size_t hi = std::min(remaining, population_[c]);
        for (std::size_t k = lo; k <= hi; ++k) {
            n[c] = k;
            compose(f, n, suffix, c + 1, remaining - k, idx + k * stride_[c]);
        }
    }

    std::vector<std::size_t> population_;
    std::vector<std::size_t> stride_;
    std::uint64_t points_ = 1;
};

struct MultiClassMvaOptions {
    std::uint64_t max_lattice_points = std::uint64_t{1} << 31;
};

/// Exact multiclass MVA over every feasible population. Centers must be
/// single-server or delay.
inline NetworkSolution solve_closed_multi_mva(const NetworkModel& m, const MultiClassMvaOptions& options = {})
{
    validate(m);
    require_kind(m, NetworkKind::closed);
    const std::size_t classes = m.classes();
    const std::size_t centers = m.centers();
    for (std::size_t i = 0; i < centers; ++i)
        if (m.is_load_dependent(i) || (!m.is_delay(i) && m.servers_at(i).count() != 1))
            fail(errc::invalid_model, "multiclass MVA supports single-server and delay centers only (center "
                                          + std::to_string(i) + ")");

    const PopulationLattice lattice(m.population);
    if (lattice.points() > options.max_lattice_points)
        fail(errc::capacity_exceeded, "population lattice needs " + std::to_string(lattice.points())
                                          + " points, budget is " + std::to_string(options.max_lattice_points));
    const auto points = static_cast<std::size_t>(lattice.points());

    std::vector<char> delay(centers);
    for (std::size_t i = 0; i < centers; ++i)
        delay[i] = m.is_delay(i);

    // q[idx * K + i] = total queue length at center i for population idx.
    std::vector<double> q;
    try {
        q.assign(points * centers, 0.0);
    } catch (const std::bad_alloc&) {
        fail(errc::capacity_exceeded, "cannot allocate " + std::to_string(points) + " lattice points");
    }
    std::vector<double> r(classes * centers, 0.0);
    std::vector<double> x(classes, 0.0);

    auto residence = [&](const std::vector<std::size_t>& n, std::size_t idx) {
        for (std::size_t c = 0; c < classes; ++c) {
            double cycle = m.think(c);
            const bool present = n[c] > 0;
            const double* q_prev = present ? &q[(idx - lattice.stride(c)) * centers] : nullptr;
            for (std::size_t i = 0; i < centers; ++i) {
                const double s = m.service(c, i);
                double rci = s;
                if (!delay[i] && present)
                    rci = s * (1.0 + q_prev[i]);
                r[c * centers + i] = rci;
                cycle += m.visits(c, i) * rci;
            }
            if (!present)
                x[c] = 0.0;
            else if (!(cycle > 0.0))
                fail(errc::invalid_model, "class " + std::to_string(c) + " has zero cycle time");
            else
                x[c] = static_cast<double>(n[c]) / cycle;
        }
    };

    lattice.for_each_by_total([&](const std::vector<std::size_t>& n, std::size_t idx) {
        if (idx == 0)
            return;
        residence(n, idx);
        double* qn = &q[idx * centers];
        for (std::size_t i = 0; i < centers; ++i) {
            double acc = 0.0;
            for (std::size_t c = 0; c < classes; ++c)
                acc += x[c] * m.visits(c, i) * r[c * centers + i];
            qn[i] = acc;
        }
    });

    // Final pass at N fills the per-class matrices.
    std::vector<std::size_t> full(m.population.begin(), m.population.end());
    const std::size_t top = lattice.index(full);
    auto sol = NetworkSolution::zeros(classes, centers);
    if (top == 0) {
        for (std::size_t c = 0; c < classes; ++c)
            for (std::size_t i = 0; i < centers; ++i)
                sol.response_time(c, i) = m.service(c, i);
    } else {
        residence(full, top);
        for (std::size_t c = 0; c < classes; ++c)
            for (std::size_t i = 0; i < centers; ++i) {
                const double xci = x[c] * m.visits(c, i);
                sol.throughput(c, i) = xci;
                sol.utilization(c, i) = xci * m.service(c, i);
                sol.response_time(c, i) = r[c * centers + i];
                sol.queue_length(c, i) = xci * r[c * centers + i];
            }
    }
    aggregate(sol, m.visits);
    return sol;
}

} // namespace qnkit::networks
