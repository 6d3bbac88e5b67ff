#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "qnkit/linalg.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Dense stochastic matrix with strictly positive entries (irreducible,
/// aperiodic).
inline qnkit::Matrix stochastic(Rng& rng, std::size_t n)
{
    qnkit::Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += p(i, j) = uniform(rng, 0.05, 1.0);
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) /= s;
    }
    return p;
}

/// Sparse stochastic matrix: a random cycle through all states keeps it
/// irreducible, extra edges are added with probability `density`.
inline qnkit::Matrix sparse_irreducible(Rng& rng, std::size_t n, double density)
{
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    qnkit::Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        p(perm[i], perm[(i + 1) % n]) = uniform(rng, 0.1, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (uniform(rng, 0.0, 1.0) < density)
                p(i, j) += uniform(rng, 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += p(i, j);
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) /= s;
    }
    return p;
}

/// Irreducible generator; each row's rates are scaled by 10^u with
/// u uniform in [-decades, decades].
inline qnkit::Matrix generator(Rng& rng, std::size_t n, double decades = 1.0)
{
    qnkit::Matrix q = sparse_irreducible(rng, n, 0.4);
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = std::pow(10.0, uniform(rng, -decades, decades));
        double out = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            q(i, j) *= scale;
            out += q(i, j);
        }
        q(i, i) = -out;
    }
    return q;
}

inline std::vector<double> probability_vector(Rng& rng, std::size_t n)
{
    std::vector<double> v(n);
    double s = 0.0;
    for (double& x : v)
        s += x = uniform(rng, 0.0, 1.0);
    for (double& x : v)
        x /= s;
    return v;
}

} // namespace gen
