#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qnkit/error.hpp"
#include "qnkit/linalg.hpp"

namespace qnkit::networks {

enum class NetworkKind { open, closed };

enum class Discipline { ps, fcfs, lcfs_pr };

/// Number of servers at a center; `infinite()` marks a delay (IS) center.
class Servers {
public:
    constexpr Servers(std::size_t count = 1) noexcept : count_(count) {}

    static constexpr Servers infinite() noexcept
    {
        Servers s;
        s.count_ = 0;
        return s;
    }

    constexpr bool is_infinite() const noexcept { return count_ == 0; }
    /// Only meaningful when finite.
    constexpr std::size_t count() const noexcept { return count_; }

    friend constexpr bool operator==(Servers, Servers) = default;

private:
    std::size_t count_;
};

/// Product-form network description. Per-class quantities are indexed by
/// class c, per-center ones by center i; matrices are C x K.
struct NetworkModel {
    NetworkKind kind = NetworkKind::closed;
    Matrix service; ///< mean service time per visit, S[c][i]
    Matrix visits;  ///< visit ratios, V[c][i]
    std::vector<Servers> servers;        ///< per center; empty means one server everywhere
    std::vector<Discipline> discipline;  ///< per center; empty means PS everywhere
    /// Load-dependent centers (single class only): load_dependent[i][j-1]
    /// is the service time with j jobs present. Empty entries are ordinary
    /// centers; an empty outer vector means no load dependence.
    std::vector<std::vector<double>> load_dependent;

    std::vector<std::size_t> population; ///< closed: N[c]
    std::vector<double> think_time;      ///< closed: Z[c]; empty means zero
    std::vector<double> arrival_rate;    ///< open: total external rate per class

    std::size_t classes() const noexcept { return service.rows(); }
    std::size_t centers() const noexcept { return service.cols(); }

    Servers servers_at(std::size_t i) const noexcept { return servers.empty() ? Servers{1} : servers[i]; }
    Discipline discipline_at(std::size_t i) const noexcept
    {
        return discipline.empty() ? Discipline::ps : discipline[i];
    }
    bool is_delay(std::size_t i) const noexcept { return servers_at(i).is_infinite(); }
    bool is_load_dependent(std::size_t i) const noexcept
    {
        return !load_dependent.empty() && !load_dependent[i].empty();
    }
    double think(std::size_t c) const noexcept { return think_time.empty() ? 0.0 : think_time[c]; }
    double demand(std::size_t c, std::size_t i) const noexcept { return service(c, i) * visits(c, i); }
};

namespace detail {

inline std::string at(const char* field, std::size_t c, std::size_t i)
{
    return std::string(field) + "[" + std::to_string(c) + "][" + std::to_string(i) + "]";
}

inline std::string at(const char* field, std::size_t c)
{
    return std::string(field) + "[" + std::to_string(c) + "]";
}

} // namespace detail

/// Checks shapes, signs and the FCFS class-independence requirement.
inline void validate(const NetworkModel& m)
{
    const std::size_t classes = m.classes();
    const std::size_t centers = m.centers();
    if (classes == 0 || centers == 0)
        fail(errc::invalid_model, "model needs at least one class and one center");
    if (m.visits.rows() != classes || m.visits.cols() != centers)
        fail(errc::invalid_model, "visits must be a " + std::to_string(classes) + "x" + std::to_string(centers)
                                      + " matrix like service");
    if (!m.servers.empty() && m.servers.size() != centers)
        fail(errc::invalid_model, "servers must list one entry per center");
    if (!m.discipline.empty() && m.discipline.size() != centers)
        fail(errc::invalid_model, "discipline must list one entry per center");
    if (!m.load_dependent.empty() && m.load_dependent.size() != centers)
        fail(errc::invalid_model, "load_dependent must list one entry per center");

    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < centers; ++i) {
            const double s = m.service(c, i);
            const double v = m.visits(c, i);
            if (!(s >= 0.0) || !std::isfinite(s))
                fail(errc::invalid_model, detail::at("service", c, i) + " must be finite and non-negative");
            if (!(v >= 0.0) || !std::isfinite(v))
                fail(errc::invalid_model, detail::at("visits", c, i) + " must be finite and non-negative");
        }

    for (std::size_t i = 0; i < centers; ++i) {
        if (m.is_load_dependent(i)) {
            if (classes != 1)
                fail(errc::invalid_model, "load-dependent centers are supported for single-class models only");
            for (std::size_t j = 0; j < m.load_dependent[i].size(); ++j) {
                const double s = m.load_dependent[i][j];
                if (!(s >= 0.0) || !std::isfinite(s))
                    fail(errc::invalid_model, detail::at("load_dependent", i, j) + " must be finite and non-negative");
            }
        }
        if (m.discipline_at(i) == Discipline::fcfs && !m.is_delay(i)) {
            // Only classes that actually visit the center matter.
            double common = -1.0;
            for (std::size_t c = 0; c < classes; ++c) {
                if (m.visits(c, i) == 0.0)
                    continue;
                if (common < 0.0)
                    common = m.service(c, i);
                else if (std::abs(m.service(c, i) - common) > 1e-12 * std::max(1.0, common))
                    fail(errc::class_dependent_fcfs_service,
                         "FCFS center " + std::to_string(i) + " has class-dependent service times");
            }
        }
    }

    if (m.kind == NetworkKind::closed) {
        if (m.population.size() != classes)
            fail(errc::invalid_model, "population must list one entry per class");
        if (!m.think_time.empty() && m.think_time.size() != classes)
            fail(errc::invalid_model, "think_time must list one entry per class");
        for (std::size_t c = 0; c < m.think_time.size(); ++c)
            if (!(m.think_time[c] >= 0.0) || !std::isfinite(m.think_time[c]))
                fail(errc::invalid_model, detail::at("think_time", c) + " must be finite and non-negative");
    } else {
        if (m.arrival_rate.size() != classes)
            fail(errc::invalid_model, "arrival_rate must list one entry per class");
        double total = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            if (!(m.arrival_rate[c] >= 0.0) || !std::isfinite(m.arrival_rate[c]))
                fail(errc::invalid_model, detail::at("arrival_rate", c) + " must be finite and non-negative");
            total += m.arrival_rate[c];
        }
        if (!(total > 0.0))
            fail(errc::invalid_model, "open model needs a positive arrival rate");
        if (!m.load_dependent.empty())
            for (std::size_t i = 0; i < centers; ++i)
                if (m.is_load_dependent(i))
                    fail(errc::invalid_model, "load-dependent centers are supported in closed models only");
    }
}

inline void require_kind(const NetworkModel& m, NetworkKind kind)
{
    if (m.kind != kind)
        fail(errc::invalid_model, kind == NetworkKind::open ? "solver requires an open model"
                                                            : "solver requires a closed model");
}

} // namespace qnkit::networks
