// hilbert.hpp: Truncated photon ⊗ phonon ⊗ atom space and elementary operators
//
// Basis ordering is fixed for the whole library: |n_photon, n_phonon, atom⟩ with
// the atom index fastest (0 = |g⟩, 1 = |e⟩), then phonon, then photon.  The
// composite index is ((n_photon * (phonon_cutoff + 1)) + n_phonon) * 2 + atom.
// A Jaynes-Cummings system is the special case phonon_cutoff == 0.

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "photonstats/errors.hpp"

namespace photonstats {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class Subsystem { photon, phonon, atom };

inline const char* to_string(Subsystem s) {
    switch (s) {
    case Subsystem::photon: return "photon";
    case Subsystem::phonon: return "phonon";
    case Subsystem::atom: return "atom";
    }
    return "?";
}

class SpaceSpec {
public:
    static constexpr int atom_dim = 2;

    SpaceSpec(int photon_cutoff, int phonon_cutoff)
        : photon_cutoff_(photon_cutoff), phonon_cutoff_(phonon_cutoff) {
        if (photon_cutoff < 2)
            throw DimensionError("photon cutoff must be >= 2, got " + std::to_string(photon_cutoff));
        if (phonon_cutoff < 0)
            throw DimensionError("phonon cutoff must be >= 0, got " + std::to_string(phonon_cutoff));
    }

    int photon_cutoff() const { return photon_cutoff_; }
    int phonon_cutoff() const { return phonon_cutoff_; }
    int photon_dim() const { return photon_cutoff_ + 1; }
    int phonon_dim() const { return phonon_cutoff_ + 1; }
    int dim() const { return photon_dim() * phonon_dim() * atom_dim; }
    bool has_phonon() const { return phonon_cutoff_ > 0; }

    int subsystem_dim(Subsystem s) const {
        switch (s) {
        case Subsystem::photon: return photon_dim();
        case Subsystem::phonon: return phonon_dim();
        case Subsystem::atom: return atom_dim;
        }
        return 0;
    }

    int index(int n_photon, int n_phonon, int atom) const {
        if (n_photon < 0 || n_photon > photon_cutoff_ || n_phonon < 0 || n_phonon > phonon_cutoff_ ||
            atom < 0 || atom >= atom_dim)
            throw DimensionError("basis label outside truncated space");
        return (n_photon * phonon_dim() + n_phonon) * atom_dim + atom;
    }

    SpaceSpec enlarged(int by = 1) const {
        return SpaceSpec(photon_cutoff_ + by, phonon_cutoff_ > 0 ? phonon_cutoff_ + by : 0);
    }

    friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

private:
    int photon_cutoff_;
    int phonon_cutoff_;
};

// Truncated bosonic lowering operator: entry sqrt(n) at (n-1, n).
inline ComplexMatrix annihilation(int cutoff) {
    if (cutoff < 0) throw DimensionError("cutoff must be non-negative");
    ComplexMatrix a = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// |g⟩⟨e| in the basis {|g⟩, |e⟩}.
inline ComplexMatrix sigma_minus() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

inline ComplexMatrix adjoint(const ComplexMatrix& op) { return op.adjoint(); }

inline ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    ComplexMatrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
    for (Eigen::Index i = 0; i < lhs.rows(); ++i)
        for (Eigen::Index j = 0; j < lhs.cols(); ++j)
            out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    return out;
}

// I ⊗ … ⊗ op ⊗ … ⊗ I in photon ⊗ phonon ⊗ atom order.
inline ComplexMatrix embed(const ComplexMatrix& op, Subsystem slot, const SpaceSpec& space) {
    const int d = space.subsystem_dim(slot);
    if (op.rows() != d || op.cols() != d)
        throw DimensionError(std::string("operator shape does not match ") + to_string(slot) + " dimension " +
                             std::to_string(d));
    auto factor = [&](Subsystem s) -> ComplexMatrix {
        return s == slot ? op : ComplexMatrix::Identity(space.subsystem_dim(s), space.subsystem_dim(s));
    };
    return kron(kron(factor(Subsystem::photon), factor(Subsystem::phonon)), factor(Subsystem::atom));
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool approx_equal(const ComplexMatrix& lhs, const ComplexMatrix& rhs, double abs_tol) {
    return lhs.rows() == rhs.rows() && lhs.cols() == rhs.cols() && max_abs(lhs - rhs) <= abs_tol;
}

inline bool is_hermitian(const ComplexMatrix& m, double abs_tol) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= abs_tol;
}

// a, b and σ⁻ lifted to the composite space, plus the number operators built from them.
struct ModeOperators {
    ComplexMatrix a;
    ComplexMatrix b;
    ComplexMatrix sm;

    explicit ModeOperators(const SpaceSpec& space)
        : a(embed(annihilation(space.photon_cutoff()), Subsystem::photon, space)),
          b(embed(annihilation(space.phonon_cutoff()), Subsystem::phonon, space)),
          sm(embed(sigma_minus(), Subsystem::atom, space)) {}

    ComplexMatrix photon_number() const { return a.adjoint() * a; }
    ComplexMatrix phonon_number() const { return b.adjoint() * b; }
    ComplexMatrix excited_projector() const { return sm.adjoint() * sm; }
};

inline ComplexVector basis_state(const SpaceSpec& space, int n_photon, int n_phonon, int atom) {
    ComplexVector v = ComplexVector::Zero(space.dim());
    v(space.index(n_photon, n_phonon, atom)) = 1.0;
    return v;
}

} // namespace photonstats
