#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "photonstats/models.hpp"
#include "support.hpp"

using namespace photonstats;

namespace {

ModelParams fig1(double delta_c) {
    ModelParams p;
    p.g = 50;
    p.omega = 0.1;
    p.gamma = 1;
    p.delta_c = delta_c;
    p.set_delta_tilde(50);
    return p;
}

ModelParams fig2(double nu) {
    ModelParams p;
    p.g = 50;
    p.omega = 0.1;
    p.gamma = 1;
    p.Gamma = 0.1;
    p.delta_a = -100;
    p.nu = nu;
    return com_resonant(p);
}

Eigen::VectorXd spectrum(const ComplexMatrix& h) { return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues(); }

double nearest(const Eigen::VectorXd& ev, double e) { return (ev.array() - e).abs().minCoeff(); }

ComplexMatrix excitation_number(const SpaceSpec& s) {
    const ModeOperators op(s);
    return op.photon_number() + op.excited_projector();
}

} // namespace

TEST(ModelParams, DeltaTildeStaysConsistent) {
    ModelParams p;
    p.delta_c = -30;
    p.set_delta_tilde(50);
    EXPECT_DOUBLE_EQ(p.delta_a, 20);
    EXPECT_DOUBLE_EQ(p.delta_tilde(), 50);
    p.delta_a = 7;
    EXPECT_DOUBLE_EQ(p.delta_tilde(), 37);
}

TEST(ModelParams, ValidationRejectsNegativeRates) {
    ModelParams p;
    EXPECT_NO_THROW(p.validate());
    for (double ModelParams::*field : {&ModelParams::gamma, &ModelParams::Gamma, &ModelParams::omega, &ModelParams::nu}) {
        ModelParams q;
        q.*field = -1;
        EXPECT_THROW(q.validate(), ValidationError);
    }
    ModelParams q;
    q.kappa = 0;
    EXPECT_THROW(q.validate(), ValidationError);
    q.kappa = 1;
    q.g = std::nan("");
    EXPECT_THROW(q.validate(), ValidationError);
}

TEST(ComResonant, SetsCavityDetuning) {
    ModelParams p;
    p.delta_a = -100;
    p.nu = 64;
    EXPECT_DOUBLE_EQ(com_resonant(p).delta_c, -36);
}

TEST(JcHamiltonian, UncoupledIsDiagonal) {
    ModelParams p;
    p.delta_c = 3;
    p.delta_a = -7;
    const SpaceSpec s(4, 0);
    const auto h = build_jc_hamiltonian(p, s);
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m < 2; ++m) EXPECT_NEAR(h(s.index(n, 0, m), s.index(n, 0, m)).real(), n * 3.0 - 7.0 * m, 1e-12);
    EXPECT_LE(max_abs(h - ComplexMatrix(h.diagonal().asDiagonal())), 0.0);
}

TEST(JcHamiltonian, ConservesExcitationsWithoutDrive) {
    auto p = fig1(12);
    p.omega = 0;
    const SpaceSpec s(4, 0);
    const auto h = build_jc_hamiltonian(p, s);
    const auto n = excitation_number(s);
    EXPECT_LE(max_abs(h * n - n * h), 1e-12);
}

TEST(JcHamiltonian, RejectsPhononSpace) {
    EXPECT_THROW(build_jc_hamiltonian(fig1(0), SpaceSpec(3, 1)), DimensionError);
}

TEST(Hamiltonians, AreHermitian) {
    const auto j = build_jc_hamiltonian(fig1(-20), SpaceSpec(4, 0));
    EXPECT_LE(max_abs(j - j.adjoint()), 1e-14);
    const auto e = build_com_effective_hamiltonian(fig2(70), SpaceSpec(3, 3));
    EXPECT_LE(max_abs(e - e.adjoint()), 1e-14);
    const auto f = build_full_com_hamiltonian(fig2(70), SpaceSpec(3, 3));
    EXPECT_LE(max_abs(f - f.adjoint()), 1e-14);
}

TEST(JcDressed, OneExcitationMatchesDiagonalisation) {
    for (double dc : {-100.0, -50.0, 0.0, 25.0, 80.0}) {
        auto p = fig1(dc);
        p.omega = 0;
        const SpaceSpec s(3, 0);
        const auto ev = spectrum(build_jc_hamiltonian(p, s));
        for (Branch b : {Branch::plus, Branch::minus}) EXPECT_LE(nearest(ev, jc_dressed_energy(1, b, p)), 1e-10);
    }
}

TEST(JcDressed, ResonantSplittings) {
    ModelParams p;
    p.g = 7;
    p.delta_c = p.delta_a = 4;
    EXPECT_NEAR(jc_dressed_energy(1, Branch::plus, p), 4 + 7, 1e-12);
    EXPECT_NEAR(jc_dressed_energy(1, Branch::minus, p), 4 - 7, 1e-12);
    EXPECT_NEAR(jc_dressed_energy(2, Branch::plus, p) - jc_dressed_energy(2, Branch::minus, p), 2 * std::sqrt(2.0) * 7,
                1e-12);
}

// The closed form uses √(4ng² + δ̃²); the variant √(4ng² + δ̃) misses the spectrum.
TEST(JcDressed, SquaredDetuningInSplitting) {
    auto p = fig1(10);
    p.omega = 0;
    const auto ev = spectrum(build_jc_hamiltonian(p, SpaceSpec(3, 0)));
    const double dt = p.delta_tilde();
    const double wrong = (0.5) * p.delta_c + 0.5 * p.delta_a + 0.5 * std::sqrt(4 * p.g * p.g + dt);
    EXPECT_GT(nearest(ev, wrong), 1.0);
    EXPECT_LE(nearest(ev, jc_dressed_energy(1, Branch::plus, p)), 1e-10);
}

TEST(JcDressed, LevelsAreNormalisedEigenvectors) {
    const SpaceSpec s(3, 0);
    for (double dc : {-80.9, -50.0, 25.0}) {
        auto p = fig1(dc);
        p.omega = 0;
        const auto h = build_jc_hamiltonian(p, s);
        const auto ev = spectrum(h);
        for (int n = 1; n <= 3; ++n) {
            const auto [plus, minus] = jc_dressed_levels(n, p, s);
            for (const auto& lvl : {plus, minus}) {
                EXPECT_EQ(lvl.n, n);
                EXPECT_NEAR(lvl.state.norm(), 1.0, 1e-12);
                EXPECT_LE((h * lvl.state - lvl.energy * lvl.state).cwiseAbs().maxCoeff(), 1e-10);
                EXPECT_LE(nearest(ev, lvl.energy), 1e-10);
            }
            EXPECT_GT(plus.energy, minus.energy);
        }
    }
    EXPECT_THROW(jc_dressed_levels(0, fig1(0), s), ValidationError);
    EXPECT_THROW(jc_dressed_levels(4, fig1(0), s), DimensionError);
}

TEST(ComEffective, ConservesExcitationsWithoutDrive) {
    auto p = fig2(40);
    p.omega = 0;
    const SpaceSpec s(3, 3);
    const auto h = build_com_effective_hamiltonian(p, s);
    const auto n = excitation_number(s);
    EXPECT_LE(max_abs(h * n - n * h), 1e-12);
}

TEST(ComEffective, DressedSplittings) {
    auto p = fig2(100);
    p.omega = 0;
    const SpaceSpec s(3, 3);
    const auto h = build_com_effective_hamiltonian(p, s);
    const auto [p1, m1] = com_dressed_levels(1, p, s);
    const auto [p2, m2] = com_dressed_levels(2, p, s);
    EXPECT_NEAR(p1.energy - m1.energy, 2 * p.g, 1e-10);
    EXPECT_NEAR(p2.energy - m2.energy, 2 * std::sqrt(2.0) * p.g, 1e-10);
    for (const auto& lvl : {p1, m1, p2, m2}) {
        EXPECT_LE((h * lvl.state - lvl.energy * lvl.state).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_NEAR(lvl.state.norm(), 1.0, 1e-12);
    }
    EXPECT_THROW(build_com_effective_hamiltonian(p, SpaceSpec(3, 0)), DimensionError);
}

TEST(FullCom, UncoupledSpectrum) {
    ModelParams p;
    p.delta_c = 2.5;
    p.delta_a = -1.25;
    p.nu = 0.75;
    const SpaceSpec s(2, 2);
    const auto h = build_full_com_hamiltonian(p, s);
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m)
            for (int q = 0; q < 2; ++q)
                EXPECT_DOUBLE_EQ(h(s.index(n, m, q), s.index(n, m, q)).real(), n * 2.5 + m * 0.75 - 1.25 * q);
    EXPECT_DOUBLE_EQ(h(s.index(0, 1, 0), s.index(0, 1, 0)).real(), 0.75);
    EXPECT_THROW(build_full_com_hamiltonian(p, SpaceSpec(2, 0)), DimensionError);
}

// Counter-rotating sidebands are detuned by 2ν; at Δ = δ + ν = 0 that is 2|δ|, so the
// effective doublets approach the full ones like g²/|δ|.
TEST(FullCom, ApproachesEffectiveAtLargeDetuning) {
    double prev = 1e9;
    for (double d : {-20.0, -50.0, -100.0, -200.0}) {
        ModelParams p;
        p.g = 5;
        p.delta_a = d;
        p.nu = -d;
        p = com_resonant(p);
        const SpaceSpec s(3, 3);
        const auto ev = spectrum(build_full_com_hamiltonian(p, s));
        double worst = 0;
        for (int n = 1; n <= 2; ++n) {
            const auto [plus, minus] = com_dressed_levels(n, p, s);
            worst = std::max({worst, nearest(ev, plus.energy), nearest(ev, minus.energy)});
        }
        EXPECT_LT(worst, prev);
        EXPECT_LE(worst, 1.2 * p.g * p.g / std::abs(d)) << "delta=" << d;
        prev = worst;
    }
}

TEST(Resonances, FigureOneLocations) {
    const auto r = two_photon_resonances(fig1(0));
    ASSERT_EQ(r.size(), 4u);
    std::vector<double> one, two;
    for (const auto& x : r) (x.photons == 1 ? one : two).push_back(x.delta_c);
    std::sort(one.begin(), one.end());
    std::sort(two.begin(), two.end());
    EXPECT_NEAR(one[0], -25 * (1 + std::sqrt(5.0)), 1e-10);
    EXPECT_NEAR(one[1], -25 * (1 - std::sqrt(5.0)), 1e-10);
    EXPECT_NEAR(two[0], -50, 1e-10);
    EXPECT_NEAR(two[1], 25, 1e-10);
}

TEST(Resonances, SubstituteBackToZeroEnergy) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> gd(1, 80), dd(-100, 100);
    for (int k = 0; k < 50; ++k) {
        ModelParams p;
        p.g = gd(rng);
        p.set_delta_tilde(dd(rng));
        const double dt = p.delta_tilde();
        for (const auto& r : two_photon_resonances(p)) {
            ModelParams q = p;
            q.delta_c = r.delta_c;
            q.set_delta_tilde(dt);
            EXPECT_LE(std::abs(jc_dressed_energy(r.photons, r.branch, q)), 1e-9);
        }
    }
}

TEST(Resonances, CollapseWithoutCoupling) {
    ModelParams p;
    p.g = 1e-300;
    for (const auto& r : two_photon_resonances(p)) EXPECT_NEAR(r.delta_c, 0.0, 1e-12);
}

TEST(DampedHamiltonian, CavityDecayOnly) {
    ModelParams p = fig1(5);
    p.gamma = 0;
    const SpaceSpec s(3, 0);
    const auto h = build_jc_hamiltonian(p, s);
    const auto hd = damped_hamiltonian(h, p, s);
    const ComplexMatrix anti = 0.5 * (hd - hd.adjoint());
    EXPECT_LE(max_abs(anti + kI * ModeOperators(s).photon_number()), 1e-14);
}

TEST(DampedHamiltonian, NoDecayNoChange) {
    ModelParams p = fig2(30);
    p.kappa = 0;
    p.gamma = 0;
    p.Gamma = 0;
    const SpaceSpec s(3, 2);
    const auto h = build_com_effective_hamiltonian(p, s);
    EXPECT_TRUE(approx_equal(damped_hamiltonian(h, p, s), h, 0.0));
}

TEST(DampedHamiltonian, OneExcitationWidths) {
    const auto p = fig2(70);
    const SpaceSpec s(3, 3);
    const auto hd = damped_hamiltonian(build_com_effective_hamiltonian(p, s), p, s);
    const int i = s.index(1, 0, 0), j = s.index(0, 1, 1);
    Eigen::Matrix2cd block;
    block << hd(i, i), hd(i, j), hd(j, i), hd(j, j);
    const Eigen::Vector2cd ev = Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(block).eigenvalues();
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(ev(k).imag(), -(p.kappa + p.gamma + p.Gamma) / 2, 1e-10);
    EXPECT_NEAR(std::abs(ev(0).real() - ev(1).real()), 2 * std::sqrt(p.g * p.g - std::pow((p.kappa - p.gamma - p.Gamma) / 2, 2)),
                1e-9);
}

TEST(DampedHamiltonian, PhononTermVanishesWithoutPhonons) {
    ModelParams p = fig1(0);
    p.Gamma = 3;
    const SpaceSpec s(3, 0);
    const auto h = build_jc_hamiltonian(p, s);
    ModelParams q = p;
    q.Gamma = 0;
    EXPECT_TRUE(approx_equal(damped_hamiltonian(h, p, s), damped_hamiltonian(h, q, s), 0.0));
}
