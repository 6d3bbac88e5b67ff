#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/networks/model.hpp"

namespace qnkit::networks {

enum class BoundsMethod { aba, bsb };

/// Per-class throughput and response-time bounds. Response times include
/// delay-center residence but not think time.
struct BoundsResult {
    std::vector<double> throughput_lower;
    std::vector<double> throughput_upper;
    std::vector<double> response_lower;
    std::vector<double> response_upper;
    /// Open models: arrival rate at which the class alone saturates its bottleneck.
    std::vector<double> saturation;
    /// Centers with the largest demand, per class.
    std::vector<std::vector<std::size_t>> bottlenecks;
};

namespace detail {

struct ClassDemands {
    double queueing = 0.0; ///< sum over queueing centers
    double delay = 0.0;    ///< sum over delay centers
    double max = 0.0;
    std::size_t positive = 0; ///< queueing centers with positive demand
    std::vector<std::size_t> bottlenecks;
};

inline ClassDemands class_demands(const NetworkModel& m, std::size_t c)
{
    ClassDemands d;
    for (std::size_t i = 0; i < m.centers(); ++i) {
        if (m.is_load_dependent(i) || (!m.is_delay(i) && m.servers_at(i).count() != 1))
            fail(errc::invalid_model, "bounds support single-server and delay centers only (center "
                                          + std::to_string(i) + ")");
        const double dci = m.demand(c, i);
        if (m.is_delay(i)) {
            d.delay += dci;
            continue;
        }
        d.queueing += dci;
        if (dci > 0.0)
            ++d.positive;
        if (dci > d.max) {
            d.max = dci;
            d.bottlenecks = {i};
        } else if (dci == d.max && dci > 0.0) {
            d.bottlenecks.push_back(i);
        }
    }
    return d;
}

inline void resize(BoundsResult& b, std::size_t classes)
{
    b.throughput_lower.assign(classes, 0.0);
    b.throughput_upper.assign(classes, 0.0);
    b.response_lower.assign(classes, 0.0);
    b.response_upper.assign(classes, 0.0);
    b.bottlenecks.assign(classes, {});
}

} // namespace detail

/// Asymptotic (ABA) or balanced-system (BSB) bounds for closed networks.
/// Delay-center demand is treated as extra think time. Multiclass models
/// support ABA only, one class at a time, with the other classes' jobs
/// counted as possible competitors.
inline BoundsResult bounds_closed(const NetworkModel& m, BoundsMethod method)
{
    validate(m);
    require_kind(m, NetworkKind::closed);
    const std::size_t classes = m.classes();
    if (method == BoundsMethod::bsb && classes != 1)
        fail(errc::invalid_model, "balanced-system bounds support single-class models only");

    std::size_t total_population = 0;
    for (std::size_t n : m.population)
        total_population += n;

    BoundsResult b;
    detail::resize(b, classes);
    for (std::size_t c = 0; c < classes; ++c) {
        const auto d = detail::class_demands(m, c);
        b.bottlenecks[c] = d.bottlenecks;
        const double n = static_cast<double>(m.population[c]);
        const double z = m.think(c) + d.delay;
        const double dq = d.queueing;
        if (m.population[c] == 0) {
            b.response_lower[c] = b.response_upper[c] = dq + d.delay;
            continue;
        }
        if (!(dq + z > 0.0))
            fail(errc::invalid_model, "class " + std::to_string(c) + " has zero demand and zero think time");

        double lo = 0.0;
        double hi = 0.0;
        if (!(d.max > 0.0)) {
            lo = hi = n / z;
        } else if (method == BoundsMethod::aba) {
            const double competitors = static_cast<double>(total_population);
            hi = std::min(n / (dq + z), 1.0 / d.max);
            lo = n / (competitors * dq + z);
        } else {
            const double avg = dq / static_cast<double>(d.positive);
            lo = n / (dq + z + (n - 1.0) * d.max / (1.0 + z / (n * dq)));
            hi = std::min(1.0 / d.max, n / (dq + z + (n - 1.0) * avg / (1.0 + z / dq)));
        }
        b.throughput_lower[c] = lo;
        b.throughput_upper[c] = hi;
        b.response_lower[c] = std::max(n / hi - z, dq) + d.delay;
        b.response_upper[c] = n / lo - z + d.delay;
    }
    return b;
}

/// Bounds for open networks. ABA: R in [sum D, sum D_i / (1 - U_i)].
/// BSB (single class): R in [D / (1 - lambda D_avg), D / (1 - lambda D_max)].
/// Throughput bounds equal the arrival rate.
inline BoundsResult bounds_open(const NetworkModel& m, BoundsMethod method)
{
    validate(m);
    require_kind(m, NetworkKind::open);
    const std::size_t classes = m.classes();
    if (method == BoundsMethod::bsb && classes != 1)
        fail(errc::invalid_model, "balanced-system bounds support single-class models only");

    std::vector<detail::ClassDemands> demands;
    for (std::size_t c = 0; c < classes; ++c)
        demands.push_back(detail::class_demands(m, c));

    std::vector<double> u(m.centers(), 0.0);
    for (std::size_t i = 0; i < m.centers(); ++i) {
        if (m.is_delay(i))
            continue;
        for (std::size_t c = 0; c < classes; ++c)
            u[i] += m.arrival_rate[c] * m.demand(c, i);
        if (!(u[i] < 1.0))
            fail(errc::unstable, "center " + std::to_string(i) + " is saturated (utilization "
                                     + std::to_string(u[i]) + ")");
    }

    BoundsResult b;
    detail::resize(b, classes);
    b.saturation.assign(classes, 0.0);
    for (std::size_t c = 0; c < classes; ++c) {
        const auto& d = demands[c];
        b.bottlenecks[c] = d.bottlenecks;
        b.throughput_lower[c] = b.throughput_upper[c] = m.arrival_rate[c];
        b.saturation[c] = d.max > 0.0 ? 1.0 / d.max : std::numeric_limits<double>::infinity();
        if (method == BoundsMethod::aba) {
            double upper = 0.0;
            for (std::size_t i = 0; i < m.centers(); ++i)
                if (!m.is_delay(i))
                    upper += m.demand(c, i) / (1.0 - u[i]);
            b.response_lower[c] = d.queueing + d.delay;
            b.response_upper[c] = upper + d.delay;
        } else {
            const double lambda = m.arrival_rate[c];
            const double avg = d.positive > 0 ? d.queueing / static_cast<double>(d.positive) : 0.0;
            b.response_lower[c] = d.queueing / (1.0 - lambda * avg) + d.delay;
            b.response_upper[c] = d.queueing / (1.0 - lambda * d.max) + d.delay;
        }
    }
    return b;
}

} // namespace qnkit::networks
