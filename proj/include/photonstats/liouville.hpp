// liouville.hpp: Lindblad superoperator, stationary state and time propagation
//
// Density matrices are column-stacked: vec(ρ)[i + j·D] = ρ(i, j), which is also
// Eigen's native column-major storage.  With that convention
//   vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).
// The dissipator keeps the factor 2 on the jump term,
//   r·L[d]ρ = r (2 d ρ d† − d†d ρ − ρ d†d),
// so a bare cavity with rate κ loses photons at 2κ.

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "photonstats/integrate.hpp"
#include "photonstats/models.hpp"

namespace photonstats {

using SparseComplex = Eigen::SparseMatrix<Complex>;
using SparseComplexRows = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

struct CollapseChannel {
    double rate{0.0};
    ComplexMatrix op;
};

inline ComplexVector vectorize(const ComplexMatrix& rho) {
    return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

inline ComplexMatrix unvectorize(const ComplexVector& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionError("vector length is not dim^2");
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

class Liouvillian {
public:
    Liouvillian(int dim, SparseComplex matrix) : dim_(dim), matrix_(std::move(matrix)) {
        matrix_.makeCompressed();
    }

    int dim() const { return dim_; }
    const SparseComplex& matrix() const { return matrix_; }
    ComplexMatrix dense() const { return ComplexMatrix(matrix_); }

    ComplexVector apply(const ComplexVector& v) const { return matrix_ * v; }
    ComplexMatrix apply(const ComplexMatrix& rho) const { return unvectorize(matrix_ * vectorize(rho), dim_); }

private:
    int dim_;
    SparseComplex matrix_;
};

class DensityMatrix {
public:
    static constexpr double hermiticity_tol = 1e-10;
    static constexpr double trace_tol = 1e-10;
    static constexpr double positivity_tol = 1e-8;

    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw DimensionError("density matrix must be square");
        if (!is_hermitian(m_, hermiticity_tol)) throw ValidationError("density matrix is not Hermitian");
        if (std::abs(m_.trace() - Complex(1.0)) > trace_tol) throw ValidationError("density matrix trace is not 1");
        min_eigenvalue_ = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m_, Eigen::EigenvaluesOnly).eigenvalues()(0);
        if (min_eigenvalue_ < -positivity_tol)
            throw ValidationError("density matrix has eigenvalue " + std::to_string(min_eigenvalue_));
    }

    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    double min_eigenvalue() const { return min_eigenvalue_; }

private:
    ComplexMatrix m_;
    double min_eigenvalue_{0.0};
};

namespace detail {

struct Entry {
    int row;
    int col;
    Complex value;
};

inline std::vector<Entry> nonzeros(const ComplexMatrix& m) {
    std::vector<Entry> out;
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (m(i, j) != Complex(0.0)) out.push_back({i, j, m(i, j)});
    return out;
}

// Adds the superoperator ρ ↦ c·(A ρ) to the triplet list.
inline void add_left(std::vector<Eigen::Triplet<Complex>>& t, const ComplexMatrix& a, Complex c, int dim) {
    for (const auto& e : nonzeros(a))
        for (int j = 0; j < dim; ++j) t.emplace_back(e.row + j * dim, e.col + j * dim, c * e.value);
}

// ρ ↦ c·(ρ B)
inline void add_right(std::vector<Eigen::Triplet<Complex>>& t, const ComplexMatrix& b, Complex c, int dim) {
    for (const auto& e : nonzeros(b))
        for (int i = 0; i < dim; ++i) t.emplace_back(i + e.col * dim, i + e.row * dim, c * e.value);
}

// ρ ↦ c·(d ρ d†)
inline void add_sandwich(std::vector<Eigen::Triplet<Complex>>& t, const ComplexMatrix& d, Complex c, int dim) {
    const auto nz = nonzeros(d);
    for (const auto& x : nz)
        for (const auto& y : nz)
            t.emplace_back(x.row + y.row * dim, x.col + y.col * dim, c * x.value * std::conj(y.value));
}

} // namespace detail

// ρ̇ = −i[H, ρ] + Σ rᵢ (2 dᵢ ρ dᵢ† − dᵢ†dᵢ ρ − ρ dᵢ†dᵢ)
inline Liouvillian build_liouvillian(const ComplexMatrix& h, std::span<const CollapseChannel> collapse) {
    const int dim = static_cast<int>(h.rows());
    if (h.rows() != h.cols()) throw DimensionError("Hamiltonian must be square");
    if (!is_hermitian(h, 1e-12 * std::max(1.0, max_abs(h)))) throw ValidationError("Hamiltonian is not Hermitian");
    std::vector<Eigen::Triplet<Complex>> t;
    detail::add_left(t, h, -kI, dim);
    detail::add_right(t, h, kI, dim);
    for (const auto& ch : collapse) {
        if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) throw ValidationError("collapse rates must be >= 0");
        if (ch.op.rows() != dim || ch.op.cols() != dim) throw DimensionError("collapse operator does not match H");
        if (ch.rate == 0.0) continue;
        const ComplexMatrix n = ch.op.adjoint() * ch.op;
        detail::add_sandwich(t, ch.op, 2.0 * ch.rate, dim);
        detail::add_left(t, n, -ch.rate, dim);
        detail::add_right(t, n, -ch.rate, dim);
    }
    const Eigen::Index n2 = static_cast<Eigen::Index>(dim) * dim;
    SparseComplex m(n2, n2);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(Complex(0.0));
    return Liouvillian(dim, std::move(m));
}

// (κ, a), (γ, σ⁻) and, when the space has a phonon mode, (Γ, b).
inline std::vector<CollapseChannel> collapse_channels(const ModelParams& p, const SpaceSpec& s) {
    const ModeOperators op(s);
    std::vector<CollapseChannel> out{{p.kappa, op.a}, {p.gamma, op.sm}};
    if (s.has_phonon()) out.push_back({p.Gamma, op.b});
    return out;
}

inline Liouvillian build_model_liouvillian(Model m, const ModelParams& p, const SpaceSpec& s) {
    p.validate();
    const auto channels = collapse_channels(p, s);
    return build_liouvillian(build_hamiltonian(m, p, s), channels);
}

// Dense spectrum of L; meant for small systems and diagnostics.
inline ComplexVector liouvillian_spectrum(const Liouvillian& l) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(l.dense(), false);
    return es.eigenvalues();
}

inline int zero_mode_multiplicity(const Liouvillian& l, double tol = 1e-10) {
    const ComplexVector ev = liouvillian_spectrum(l);
    int count = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) < tol) ++count;
    return count;
}

// Stationary state from L·vec(ρ) = 0 with the first equation replaced by Tr ρ = 1.
// The replaced system is singular exactly when the zero eigenspace of L is
// degenerate, which is detected from the factorisation and a conditioning probe.
inline DensityMatrix steadystate(const Liouvillian& l, double* residual_out = nullptr) {
    const int dim = l.dim();
    const Eigen::Index n2 = static_cast<Eigen::Index>(dim) * dim;
    const SparseComplex& lm = l.matrix();

    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(lm.nonZeros()) + dim);
    for (Eigen::Index col = 0; col < lm.outerSize(); ++col)
        for (SparseComplex::InnerIterator it(lm, col); it; ++it)
            if (it.row() != 0) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(col), it.value());
    for (int i = 0; i < dim; ++i) t.emplace_back(0, i + i * dim, Complex(1.0));
    SparseComplex m(n2, n2);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();

    Eigen::SparseLU<SparseComplex, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success)
        throw NonUniqueSteadyStateError("trace-constrained Liouvillian is singular: " + lu.lastErrorMessage());

    ComplexVector rhs = ComplexVector::Zero(n2);
    rhs(0) = 1.0;
    ComplexVector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw ConvergenceError("steady-state solve failed");

    // Conditioning probe: a degenerate zero eigenspace leaves an O(1/eps) direction.
    ComplexVector probe(n2);
    for (Eigen::Index i = 0; i < n2; ++i) probe(i) = Complex(std::cos(0.37 * i), std::sin(0.91 * i));
    const ComplexVector y = lu.solve(probe);
    double row_norm = 0.0;
    for (Eigen::Index col = 0; col < m.outerSize(); ++col)
        for (SparseComplex::InnerIterator it(m, col); it; ++it) row_norm = std::max(row_norm, std::abs(it.value()));
    const double cond = y.cwiseAbs().maxCoeff() * row_norm;
    if (!std::isfinite(cond) || cond > 1e12)
        throw NonUniqueSteadyStateError("Liouvillian zero eigenvalue is degenerate (condition estimate " +
                                        std::to_string(cond) + ")");

    // Iterative refinement.  Near dark points the two-photon populations are ~1e-13
    // and the bare LU solution gets them wrong at the 1e-3 level even though the
    // residual is already at round-off.
    for (int step = 0; step < 2; ++step) x += lu.solve(rhs - m * x);
    const double residual = (lm * x).cwiseAbs().maxCoeff();
    if (residual > 1e-10)
        throw ConvergenceError("steady-state residual " + std::to_string(residual) + " exceeds 1e-10");
    if (residual_out) *residual_out = residual;

    ComplexMatrix rho = unvectorize(x, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    try {
        return DensityMatrix(std::move(rho));
    } catch (const ValidationError& e) {
        throw ConvergenceError(std::string("steady state is not a valid density matrix: ") + e.what());
    }
}

// ρ(t) = exp(L t) ρ0 for every t in the grid (t = 0 returns ρ0 unchanged).
inline std::vector<ComplexMatrix> propagate(const Liouvillian& l, const ComplexMatrix& rho0,
                                            std::span<const double> t_grid, const StepperOptions& opt = {},
                                            IntegrationStats* stats = nullptr) {
    if (rho0.rows() != l.dim() || rho0.cols() != l.dim()) throw DimensionError("initial state does not match L");
    const SparseComplexRows rows(l.matrix());
    auto rhs = [&rows](const ComplexVector& y, ComplexVector& dy) { dy.noalias() = rows * y; };
    const auto traj = integrate_adaptive(rhs, vectorize(rho0), t_grid, opt, stats);
    std::vector<ComplexMatrix> out;
    out.reserve(traj.size());
    for (const auto& v : traj) out.push_back(unvectorize(v, l.dim()));
    return out;
}

} // namespace photonstats
