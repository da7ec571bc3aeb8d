#pragma once

#include <cstddef>

#include "funbench/fcurve.hpp"

namespace funbench {

enum class BasisKind { Fourier };

/// An ordered family of basis functions on [0, 1].
///
/// Fourier ordering: phi_1 = 1, phi_{2k} = sqrt(2) sin(2 pi k t),
/// phi_{2k+1} = sqrt(2) cos(2 pi k t). The family is orthonormal in L2[0,1],
/// so the integral of a product of two expansions is the dot product of
/// their coefficient vectors.
class BasisSystem {
public:
    explicit BasisSystem(std::size_t size, BasisKind kind = BasisKind::Fourier);

    std::size_t size() const noexcept { return size_; }
    BasisKind kind() const noexcept { return kind_; }

    /// Value of the k-th function (1-based) at t.
    double value(std::size_t k, double t) const;

    bool operator==(const BasisSystem&) const = default;

private:
    std::size_t size_;
    BasisKind kind_;
};

/// T x q matrix with entry (j, k) = phi_{k+1}(t_j).
Matrix evaluate_basis(const BasisSystem& system, const Grid& grid);

/// n x q basis coefficients of n curves.
struct CoefficientRepr {
    CoefficientRepr(Matrix coeffs, BasisSystem system);

    Matrix coeffs;
    BasisSystem system;
};

/// Per-curve least squares: argmin ||y - Phi theta||^2 + ridge ||theta||^2.
/// ridge = 0 requires q <= T and a nonsingular normal matrix.
CoefficientRepr smooth_fit(const FunctionalDataset& ds, const BasisSystem& system, double ridge);

/// Raw-matrix form of smooth_fit; rows of curves are samples on grid.
Matrix smooth_coefficients(const Matrix& curves, const Grid& grid, const BasisSystem& system, double ridge);

FunctionalDataset reconstruct(const CoefficientRepr& repr, const Grid& grid);

}  // namespace funbench
