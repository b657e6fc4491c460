// analytic.hpp: Weak-drive amplitude ansatz: steady amplitudes, n̄, g²(0), g²(τ)
//
// The state is truncated to five basis vectors, ordered throughout as
//   0: ground          |0,g⟩        |0,0,g⟩
//   1: one photon      |1,g⟩        |1,0,g⟩
//   2: one-excitation partner  |0,e⟩  |0,1,e⟩
//   3: two-excitation partner  |1,e⟩  |1,1,e⟩
//   4: two photons     |2,g⟩        |2,0,g⟩
// (Jaynes-Cummings | centre-of-mass).  Amplitudes evolve as dA/dt = −i H_damped A.
// With complex rates κ̃ (state 1) and γ̃ (state 2), D = g² + γ̃κ̃ and
// D₂ = g² + κ̃² + γ̃κ̃, the leading-order steady amplitudes (A₀ = 1) are
//   A₁ = −iΩγ̃/D,  A₂ = −gΩ/D,
//   A₃ = i g Ω² (γ̃ + κ̃) / (D D₂),
//   A₄ = Ω² (g² − γ̃κ̃ − γ̃²) / (√2 D D₂),
// so g²(0) = 2|A₄|²/|A₁|⁴ and n̄ = |A₁|².
//
// The reduced centre-of-mass two-photon amplitude g²Ω²/(√2 D D₂) omits the direct
// drive path |1,0,g⟩ → |2,0,g⟩; it is kept as com_reduced_* for reference only.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "photonstats/correlations.hpp"
#include "photonstats/integrate.hpp"
#include "photonstats/models.hpp"

namespace photonstats {

inline constexpr double kWeakDriveLimit = 0.5; // Ω/κ above this is flagged

struct JcAmplitudes {
    Complex a0g{1.0};
    Complex a1g;
    Complex a0e;
    Complex a1e;
    Complex a2g;
    bool weak_drive{true};
};

struct ComAmplitudes {
    Complex a00{1.0};
    Complex a10;
    Complex a01;
    Complex a11;
    Complex a20;
    bool weak_drive{true};
};

namespace detail {

inline constexpr double kSingularTol = 1e-12;

struct ComplexRates {
    Complex photon;  // κ̃
    Complex partner; // γ̃
};

inline ComplexRates jc_rates(const ModelParams& p) {
    return {Complex(p.kappa, p.delta_c), Complex(p.gamma, p.delta_a)};
}

inline ComplexRates com_rates(const ModelParams& p) {
    const double w = p.delta_a + p.nu;
    return {Complex(p.kappa, w), Complex(p.gamma + p.Gamma, w)};
}

// Leading-order amplitudes in the five-state order documented above.
inline std::array<Complex, 5> weak_drive_amplitudes(const ComplexRates& r, double g, double omega) {
    const Complex kt = r.photon, gt = r.partner;
    const Complex d1 = g * g + gt * kt;
    const Complex d2 = g * g + kt * kt + gt * kt;
    if (std::abs(d1) < kSingularTol) throw SingularPointError("g^2 + gt*kt vanishes");
    if (std::abs(d2) < kSingularTol) throw SingularPointError("g^2 + kt^2 + gt*kt vanishes");
    const double w2 = omega * omega;
    return {Complex(1.0), -kI * omega * gt / d1, -g * omega / d1, kI * g * w2 * (gt + kt) / (d1 * d2),
            w2 * (g * g - gt * kt - gt * gt) / (std::sqrt(2.0) * d1 * d2)};
}

inline double amplitude_g2(Complex one_photon, Complex two_photon) {
    const double p1 = std::norm(one_photon);
    if (std::sqrt(p1) < 1e-14) throw UndefinedCorrelationError("one-photon amplitude vanishes");
    return 2.0 * std::norm(two_photon) / (p1 * p1);
}

} // namespace detail

inline bool is_weak_drive(const ModelParams& p) { return p.omega / p.kappa <= kWeakDriveLimit; }

inline JcAmplitudes jc_steady_amplitudes(const ModelParams& p) {
    const auto a = detail::weak_drive_amplitudes(detail::jc_rates(p), p.g, p.omega);
    return {a[0], a[1], a[2], a[3], a[4], is_weak_drive(p)};
}

inline double jc_analytic_g2(const ModelParams& p) {
    const auto a = jc_steady_amplitudes(p);
    return detail::amplitude_g2(a.a1g, a.a2g);
}

// Ω²|γ + iδ|² / |g² + (γ + iδ)(κ + iΔ)|²
inline double jc_analytic_nbar(const ModelParams& p) { return std::norm(jc_steady_amplitudes(p).a1g); }

inline ComAmplitudes com_steady_amplitudes(const ModelParams& p) {
    const auto a = detail::weak_drive_amplitudes(detail::com_rates(p), p.g, p.omega);
    return {a[0], a[1], a[2], a[3], a[4], is_weak_drive(p)};
}

inline double com_analytic_g2(const ModelParams& p) {
    const auto a = com_steady_amplitudes(p);
    return detail::amplitude_g2(a.a10, a.a20);
}

// Ω²|γ̃|² / |g² + γ̃κ̃|²
inline double com_analytic_nbar(const ModelParams& p) { return std::norm(com_steady_amplitudes(p).a10); }

// Centre-of-mass amplitudes with the two-excitation pair solved without the direct
// drive into |2,0,g⟩.
inline ComAmplitudes com_reduced_amplitudes(const ModelParams& p) {
    const auto r = detail::com_rates(p);
    const Complex kt = r.photon, gt = r.partner;
    const double g = p.g, w2 = p.omega * p.omega;
    const Complex d1 = g * g + gt * kt;
    const Complex d2 = g * g + kt * kt + gt * kt;
    if (std::abs(d1) < detail::kSingularTol || std::abs(d2) < detail::kSingularTol)
        throw SingularPointError("reduced amplitudes: vanishing denominator");
    return {Complex(1.0),
            -kI * p.omega * gt / d1,
            -g * p.omega / d1,
            -kI * g * kt * w2 / (d1 * d2),
            g * g * w2 / (std::sqrt(2.0) * d1 * d2),
            is_weak_drive(p)};
}

// g⁴(g² + γ̃*κ̃*)(g² + γ̃κ̃) / [(g² + κ̃*² + γ̃*κ̃*)(g² + κ̃² + γ̃κ̃)|γ̃|⁴].
inline double com_reduced_g2(const ModelParams& p) {
    const auto r = detail::com_rates(p);
    const Complex kt = r.photon, gt = r.partner;
    const double g2 = p.g * p.g;
    const Complex num = g2 * g2 * (g2 + std::conj(gt) * std::conj(kt)) * (g2 + gt * kt);
    const Complex den = (g2 + std::conj(kt) * std::conj(kt) + std::conj(gt) * std::conj(kt)) *
                        (g2 + kt * kt + gt * kt) * std::norm(gt) * std::norm(gt);
    if (std::abs(den) < detail::kSingularTol) throw SingularPointError("reduced g2: vanishing denominator");
    return (num / den).real();
}

inline bool has_analytic_route(Model m) { return m != Model::com_full; }

inline double analytic_nbar(Model m, const ModelParams& p) {
    if (m == Model::jc) return jc_analytic_nbar(p);
    if (m == Model::com_effective) return com_analytic_nbar(p);
    throw ValidationError("no weak-drive closed form for the full centre-of-mass Hamiltonian");
}

inline double analytic_g2(Model m, const ModelParams& p) {
    if (m == Model::jc) return jc_analytic_g2(p);
    if (m == Model::com_effective) return com_analytic_g2(p);
    throw ValidationError("no weak-drive closed form for the full centre-of-mass Hamiltonian");
}

// −i H_damped projected onto the five-state basis, read off the model Hamiltonian.
inline Eigen::Matrix<Complex, 5, 5> five_level_generator(Model m, const ModelParams& p) {
    if (!has_analytic_route(m)) throw ValidationError("five-level model needs jc or com-effective");
    const SpaceSpec s(2, m == Model::jc ? 0 : 1);
    const ComplexMatrix hd = damped_hamiltonian(build_hamiltonian(m, p, s), p, s);
    const int partner_phonon = m == Model::jc ? 0 : 1;
    const std::array<int, 5> idx{s.index(0, 0, 0), s.index(1, 0, 0), s.index(0, partner_phonon, 1),
                                 s.index(1, partner_phonon, 1), s.index(2, 0, 0)};
    Eigen::Matrix<Complex, 5, 5> gen;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) gen(i, j) = -kI * hd(idx[i], idx[j]);
    return gen;
}

// Leading-order steady amplitudes by block elimination of the projected generator:
// the one-excitation pair is driven by A₀ = 1, the two-excitation pair by the
// one-excitation pair; feedback from higher to lower manifolds is O(Ω²) and dropped.
inline std::array<Complex, 5> perturbative_amplitudes(Model m, const ModelParams& p) {
    const auto gen = five_level_generator(m, p);
    const Eigen::Matrix2cd g11 = gen.block<2, 2>(1, 1);
    const Eigen::Vector2cd g10 = gen.block<2, 1>(1, 0);
    const Eigen::Matrix2cd g22 = gen.block<2, 2>(3, 3);
    const Eigen::Matrix2cd g21 = gen.block<2, 2>(3, 1);
    if (std::abs(g11.determinant()) < detail::kSingularTol || std::abs(g22.determinant()) < detail::kSingularTol)
        throw SingularPointError("five-level blocks are singular");
    const Eigen::Vector2cd x1 = -g11.partialPivLu().solve(g10);
    const Eigen::Vector2cd x2 = -g22.partialPivLu().solve(g21 * x1);
    return {Complex(1.0), x1(0), x1(1), x2(0), x2(1)};
}

// Delayed coincidences from the conditional state a|Ψ⟩:
//   A₀(0) = Ā₁,  A₁(0) = √2 Ā₄,  A₂(0) = Ā₃,  A₃(0) = A₄(0) = 0,
// evolved with A₀ held fixed and without two→one-excitation feedback, so the
// trajectory relaxes onto Ā₁·(steady amplitudes).  g²(τ) = |A₁(τ)|² / |Ā₁|⁴.
inline G2Curve amplitude_ode_g2tau(Model m, const ModelParams& p, std::span<const double> tau_grid,
                                   const StepperOptions& opt = {}) {
    p.validate();
    const auto steady = m == Model::jc ? detail::weak_drive_amplitudes(detail::jc_rates(p), p.g, p.omega)
                                       : detail::weak_drive_amplitudes(detail::com_rates(p), p.g, p.omega);
    const double norm1 = std::norm(steady[1]);
    if (std::sqrt(norm1) < 1e-14) throw UndefinedCorrelationError("one-photon amplitude vanishes");

    Eigen::Matrix<Complex, 5, 5> gen = five_level_generator(m, p);
    gen.row(0).setZero();
    gen.block<2, 2>(1, 3).setZero();
    const ComplexMatrix gd = gen;

    ComplexVector a0(5);
    a0 << steady[1], std::sqrt(2.0) * steady[4], steady[3], 0.0, 0.0;
    auto rhs = [&gd](const ComplexVector& y, ComplexVector& dy) { dy.noalias() = gd * y; };
    const auto traj = integrate_adaptive(rhs, a0, tau_grid, opt);

    G2Curve curve;
    curve.tau.assign(tau_grid.begin(), tau_grid.end());
    curve.values.reserve(traj.size());
    for (const auto& y : traj) curve.values.push_back(std::norm(y(1)) / (norm1 * norm1));
    curve.g2_zero = 2.0 * std::norm(steady[4]) / (norm1 * norm1);
    return curve;
}

inline G2Curve amplitude_ode_g2tau(const ModelParams& p, std::span<const double> tau_grid,
                                   const StepperOptions& opt = {}) {
    return amplitude_ode_g2tau(Model::com_effective, p, tau_grid, opt);
}

} // namespace photonstats
