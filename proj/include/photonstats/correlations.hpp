// correlations.hpp: Photon number and second-order coherence from density matrices

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "photonstats/liouville.hpp"

namespace photonstats {

inline constexpr double kMinPhotonNumber = 1e-14;

struct G2Curve {
    std::vector<double> tau;
    std::vector<double> values;
    double g2_zero{0.0};
};

// Tr(ρ a†a)
inline double mean_photon(const DensityMatrix& rho, const ComplexMatrix& a) {
    const Complex n = (rho.matrix() * a.adjoint() * a).trace();
    if (std::abs(n.imag()) > 1e-10) throw ValidationError("photon number has an imaginary part");
    return n.real();
}

// Tr(ρ a†a†aa) / n̄²
inline double g2_zero(const DensityMatrix& rho, const ComplexMatrix& a) {
    const double n = mean_photon(rho, a);
    if (n <= kMinPhotonNumber) throw UndefinedCorrelationError("g2(0) undefined: mean photon number is zero");
    const ComplexMatrix ad = a.adjoint();
    const Complex num = (rho.matrix() * ad * ad * a * a).trace();
    return num.real() / (n * n);
}

// g²(τ) = Tr[a†a e^{Lτ}(a ρ_s a†)] / n̄², by the quantum regression theorem.
//
// The seed is propagated as the unit-trace conditional state a ρ_s a† / n̄, whose photon
// populations relax to O(n̄); the absolute tolerance is scaled by n̄ so that it stays
// below them when n̄ is tiny (near dark points n̄ ~ 1e-8).
inline G2Curve g2_tau(const Liouvillian& l, const DensityMatrix& rho_s, const ComplexMatrix& a,
                      std::span<const double> tau_grid, const StepperOptions& opt = {}) {
    const double n = mean_photon(rho_s, a);
    if (n <= kMinPhotonNumber) throw UndefinedCorrelationError("g2(tau) undefined: mean photon number is zero");
    const ComplexMatrix ad = a.adjoint();
    const ComplexMatrix number = ad * a;
    const ComplexMatrix seed = a * rho_s.matrix() * ad / n;
    StepperOptions scaled = opt;
    scaled.atol = opt.atol * std::min(1.0, n);
    const auto xs = propagate(l, seed, tau_grid, scaled);

    G2Curve curve;
    curve.tau.assign(tau_grid.begin(), tau_grid.end());
    curve.values.reserve(xs.size());
    for (const auto& x : xs) {
        const Complex v = (number * x).trace() / n;
        if (std::abs(v.imag()) > 1e-9) throw ConvergenceError("g2(tau) has imaginary residue above 1e-9");
        if (!std::isfinite(v.real())) throw ConvergenceError("g2(tau) is not finite");
        curve.values.push_back(v.real());
    }
    const Complex g0 = (ad * ad * a * a * rho_s.matrix()).trace() / (n * n);
    curve.g2_zero = g0.real();
    return curve;
}

struct SchwarzVerdict {
    bool violated{false};
    double tau{0.0};    // location of the largest g²(τ) over τ > 0
    double excess{0.0}; // max g²(τ) − g²(0) over τ > 0
};

// Classical light obeys g²(τ) ≤ g²(0); flags a finite delay exceeding g²(0) by > threshold.
inline SchwarzVerdict schwarz_violation(const G2Curve& curve, double threshold = 1e-6) {
    SchwarzVerdict v;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < curve.tau.size(); ++i) {
        if (curve.tau[i] <= 0.0) continue;
        if (!best || curve.values[i] > curve.values[*best]) best = i;
    }
    if (!best) return v;
    v.tau = curve.tau[*best];
    v.excess = curve.values[*best] - curve.g2_zero;
    v.violated = v.excess > threshold;
    return v;
}

} // namespace photonstats
