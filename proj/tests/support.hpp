#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "photonstats/hilbert.hpp"

namespace testing_support {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

inline photonstats::ComplexMatrix random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    photonstats::ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = {d(rng), d(rng)};
    return m;
}

inline photonstats::ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
    const auto m = random_matrix(n, rng);
    return 0.5 * (m + m.adjoint());
}

// Random full-rank density matrix.
inline photonstats::ComplexMatrix random_density(int n, std::mt19937_64& rng) {
    const auto m = random_matrix(n, rng);
    photonstats::ComplexMatrix rho = m * m.adjoint();
    return rho / rho.trace();
}

} // namespace testing_support
