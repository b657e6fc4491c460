// models.hpp: Jaynes-Cummings and atomic centre-of-mass Hamiltonians
//
// All energies and rates are in units of the cavity decay κ.  Detunings follow the
// rotating frame of the drive: Δ = ω_a − ω_L (cavity), δ = ω_e − ω_L (atom),
// δ̃ = δ − Δ.

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "photonstats/hilbert.hpp"

namespace photonstats {

struct ModelParams {
    double delta_c{0.0}; // Δ
    double delta_a{0.0}; // δ
    double nu{0.0};      // trap frequency
    double g{0.0};
    double omega{0.0};   // drive amplitude Ω
    double kappa{1.0};
    double gamma{0.0};   // atomic decay
    double Gamma{0.0};   // phonon decay

    double delta_tilde() const { return delta_a - delta_c; }

    // Keeps δ̃ by moving δ.
    ModelParams& set_delta_tilde(double dt) {
        delta_a = delta_c + dt;
        return *this;
    }

    void validate() const {
        const double all[] = {delta_c, delta_a, nu, g, omega, kappa, gamma, Gamma};
        for (double v : all)
            if (!std::isfinite(v)) throw ValidationError("model parameters must be finite");
        if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
        if (gamma < 0.0) throw ValidationError("gamma must be non-negative");
        if (Gamma < 0.0) throw ValidationError("Gamma must be non-negative");
        if (omega < 0.0) throw ValidationError("omega must be non-negative");
        if (nu < 0.0) throw ValidationError("nu must be non-negative");
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Three-mode resonance used by every centre-of-mass experiment: Δ = δ + ν.
inline ModelParams com_resonant(ModelParams p) {
    p.delta_c = p.delta_a + p.nu;
    return p;
}

enum class Model {
    jc,            // Δ a†a + δ σ⁺σ⁻ + g(a†σ⁻ + aσ⁺) + Ω(a† + a)
    com_effective, // (δ+ν)(a†a + b†b) + g(a†bσ⁻ + ab†σ⁺) + Ω(a† + a)
    com_full,      // Δ a†a + δ σ⁺σ⁻ + ν b†b + g(a†σ⁻ + aσ⁺)(b† + b) + Ω(a† + a)
};

inline const char* to_string(Model m) {
    switch (m) {
    case Model::jc: return "jc";
    case Model::com_effective: return "com-effective";
    case Model::com_full: return "com-full";
    }
    return "?";
}

inline bool uses_phonon(Model m) { return m != Model::jc; }

inline ComplexMatrix build_jc_hamiltonian(const ModelParams& p, const SpaceSpec& s) {
    if (s.has_phonon()) throw DimensionError("Jaynes-Cummings Hamiltonian needs phonon cutoff 0");
    const ModeOperators op(s);
    const ComplexMatrix ad = op.a.adjoint();
    const ComplexMatrix sp = op.sm.adjoint();
    return p.delta_c * ad * op.a + p.delta_a * sp * op.sm + p.g * (ad * op.sm + op.a * sp) + p.omega * (ad + op.a);
}

inline ComplexMatrix build_com_effective_hamiltonian(const ModelParams& p, const SpaceSpec& s) {
    if (!s.has_phonon()) throw DimensionError("centre-of-mass Hamiltonian needs phonon cutoff >= 1");
    const ModeOperators op(s);
    const ComplexMatrix ad = op.a.adjoint();
    const ComplexMatrix bd = op.b.adjoint();
    const ComplexMatrix sp = op.sm.adjoint();
    return (p.delta_a + p.nu) * (ad * op.a + bd * op.b) + p.g * (ad * op.b * op.sm + op.a * bd * sp) +
           p.omega * (ad + op.a);
}

inline ComplexMatrix build_full_com_hamiltonian(const ModelParams& p, const SpaceSpec& s) {
    if (!s.has_phonon()) throw DimensionError("centre-of-mass Hamiltonian needs phonon cutoff >= 1");
    const ModeOperators op(s);
    const ComplexMatrix ad = op.a.adjoint();
    const ComplexMatrix bd = op.b.adjoint();
    const ComplexMatrix sp = op.sm.adjoint();
    return p.delta_c * ad * op.a + p.delta_a * sp * op.sm + p.nu * bd * op.b +
           p.g * (ad * op.sm + op.a * sp) * (bd + op.b) + p.omega * (ad + op.a);
}

inline ComplexMatrix build_hamiltonian(Model m, const ModelParams& p, const SpaceSpec& s) {
    switch (m) {
    case Model::jc: return build_jc_hamiltonian(p, s);
    case Model::com_effective: return build_com_effective_hamiltonian(p, s);
    case Model::com_full: return build_full_com_hamiltonian(p, s);
    }
    throw ValidationError("unknown model");
}

// h − i(κ a†a + γ σ⁺σ⁻ + Γ b†b).  The phonon term vanishes identically when the
// space has no phonon levels.
inline ComplexMatrix damped_hamiltonian(const ComplexMatrix& h, const ModelParams& p, const SpaceSpec& s) {
    if (h.rows() != s.dim() || h.cols() != s.dim()) throw DimensionError("Hamiltonian does not match space");
    const ModeOperators op(s);
    return h - kI * (p.kappa * op.photon_number() + p.gamma * op.excited_projector() + p.Gamma * op.phonon_number());
}

enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

struct DressedLevel {
    int n{0};
    Branch branch{Branch::plus};
    double energy{0.0};
    ComplexVector state;
};

// E±⁽ⁿ⁾ = (n − ½)Δ + ½δ ± ½√(4ng² + δ̃²).
inline double jc_dressed_energy(int n, Branch b, const ModelParams& p) {
    if (n < 1) throw ValidationError("manifold index must be >= 1");
    const double dt = p.delta_tilde();
    const double split = std::sqrt(4.0 * n * p.g * p.g + dt * dt);
    return (n - 0.5) * p.delta_c + 0.5 * p.delta_a + 0.5 * branch_sign(b) * split;
}

namespace detail {

// Diagonalises the drive-free 2×2 block spanned by |upper⟩ = first, |lower⟩ = second
// and lifts the eigenvectors into the composite basis.  Returns (plus, minus).
inline std::pair<DressedLevel, DressedLevel> dressed_pair(int n, const Eigen::Matrix2cd& block, int first, int second,
                                                          const SpaceSpec& s, double e_plus, double e_minus) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
    auto lift = [&](int col, Branch br, double energy) {
        DressedLevel lvl{n, br, energy, ComplexVector::Zero(s.dim())};
        Eigen::Vector2cd v = es.eigenvectors().col(col);
        // Fix the global phase so the first basis component is real and non-negative.
        const Complex c = v(0);
        if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
        else if (std::abs(v(1)) > 0.0) v *= std::conj(v(1)) / std::abs(v(1));
        lvl.state(first) = v(0);
        lvl.state(second) = v(1);
        return lvl;
    };
    // Eigenvalues come sorted ascending.
    return {lift(1, Branch::plus, e_plus), lift(0, Branch::minus, e_minus)};
}

} // namespace detail

// Manifold-n dressed states of the Jaynes-Cummings Hamiltonian (Ω = 0).  Energies use
// the closed form; eigenvectors come from diagonalising the {|n,g⟩, |n−1,e⟩} block.
inline std::pair<DressedLevel, DressedLevel> jc_dressed_levels(int n, const ModelParams& p, const SpaceSpec& s) {
    if (n < 1) throw ValidationError("manifold index must be >= 1");
    if (n > s.photon_cutoff()) throw DimensionError("manifold exceeds photon cutoff");
    Eigen::Matrix2cd block;
    const double c = p.g * std::sqrt(static_cast<double>(n));
    block << n * p.delta_c, c, c, (n - 1) * p.delta_c + p.delta_a;
    return detail::dressed_pair(n, block, s.index(n, 0, 0), s.index(n - 1, 0, 1), s,
                                jc_dressed_energy(n, Branch::plus, p), jc_dressed_energy(n, Branch::minus, p));
}

// Low-lying dressed states |n±⟩ of the effective centre-of-mass Hamiltonian (Ω = 0),
// mixing |n,0,g⟩ and |n−1,1,e⟩ with splitting 2√n·g.
inline std::pair<DressedLevel, DressedLevel> com_dressed_levels(int n, const ModelParams& p, const SpaceSpec& s) {
    if (n < 1) throw ValidationError("manifold index must be >= 1");
    if (n > s.photon_cutoff() || !s.has_phonon()) throw DimensionError("manifold exceeds truncated space");
    const double base = n * (p.delta_a + p.nu);
    const double c = p.g * std::sqrt(static_cast<double>(n));
    Eigen::Matrix2cd block;
    block << base, c, c, base;
    return detail::dressed_pair(n, block, s.index(n, 0, 0), s.index(n - 1, 1, 1), s, base + std::abs(c),
                                base - std::abs(c));
}

struct Resonance {
    int photons{1}; // 1: |0⟩→|1±⟩, 2: |0⟩→|2±⟩
    Branch branch{Branch::plus};
    double delta_c{0.0};
};

// Cavity detunings at which E±⁽¹⁾ = 0 (single-photon) or E±⁽²⁾ = 0 (two-photon), with
// δ̃ held fixed so that δ = Δ + δ̃.  Each condition is linear in Δ:
// nΔ + δ̃/2 ± ½√(4ng² + δ̃²) = 0.
inline std::vector<Resonance> two_photon_resonances(const ModelParams& p) {
    const double dt = p.delta_tilde();
    std::vector<Resonance> out;
    for (int n : {1, 2}) {
        const double split = std::sqrt(4.0 * n * p.g * p.g + dt * dt);
        for (Branch b : {Branch::plus, Branch::minus})
            out.push_back({n, b, (-0.5 * dt - 0.5 * branch_sign(b) * split) / n});
    }
    return out;
}

} // namespace photonstats
