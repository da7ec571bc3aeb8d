#include "funbench/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "funbench/errors.hpp"

namespace funbench {

BasisSystem::BasisSystem(std::size_t size, BasisKind kind) : size_(size), kind_(kind) {
    if (size_ < 1) throw InvalidArgument("basis system needs at least one function");
}

double BasisSystem::value(std::size_t k, double t) const {
    if (k < 1 || k > size_) throw InvalidArgument("basis index " + std::to_string(k) + " out of range");
    if (k == 1) return 1.0;
    const double freq = static_cast<double>(k / 2);
    const double arg = 2.0 * std::numbers::pi * freq * t;
    return std::numbers::sqrt2 * (k % 2 == 0 ? std::sin(arg) : std::cos(arg));
}

Matrix evaluate_basis(const BasisSystem& system, const Grid& grid) {
    const auto rows = static_cast<Eigen::Index>(grid.size());
    const auto cols = static_cast<Eigen::Index>(system.size());
    Matrix phi(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j) {
        for (Eigen::Index k = 0; k < cols; ++k) {
            phi(j, k) = system.value(static_cast<std::size_t>(k + 1), grid[static_cast<std::size_t>(j)]);
        }
    }
    return phi;
}

CoefficientRepr::CoefficientRepr(Matrix c, BasisSystem s) : coeffs(std::move(c)), system(s) {
    if (static_cast<std::size_t>(coeffs.cols()) != system.size()) {
        throw DimensionError("coefficient matrix has " + std::to_string(coeffs.cols()) +
                             " columns for a basis of size " + std::to_string(system.size()));
    }
    if (!coeffs.allFinite()) throw NumericalError("non-finite basis coefficients");
}

Matrix smooth_coefficients(const Matrix& curves, const Grid& grid, const BasisSystem& system, double ridge) {
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge must be a finite nonnegative number");
    if (static_cast<std::size_t>(curves.cols()) != grid.size()) {
        throw DimensionError("curves have " + std::to_string(curves.cols()) + " columns, grid has " +
                             std::to_string(grid.size()));
    }
    if (ridge == 0.0 && system.size() > grid.size()) {
        throw IllPosedError("basis size " + std::to_string(system.size()) + " exceeds grid length " +
                            std::to_string(grid.size()) + " without ridge");
    }
    const Matrix phi = evaluate_basis(system, grid);
    Matrix normal = phi.transpose() * phi;
    normal.diagonal().array() += ridge;
    Eigen::LDLT<Matrix> ldlt(normal);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-13) {
        throw NumericalError("singular smoothing normal matrix");
    }
    // Solve for all curves at once: theta^T = (Phi^T Phi + r I)^{-1} Phi^T Y^T.
    const Matrix rhs = phi.transpose() * curves.transpose();
    return ldlt.solve(rhs).transpose();
}

CoefficientRepr smooth_fit(const FunctionalDataset& ds, const BasisSystem& system, double ridge) {
    return CoefficientRepr(smooth_coefficients(ds.curves(), ds.grid(), system, ridge), system);
}

FunctionalDataset reconstruct(const CoefficientRepr& repr, const Grid& grid) {
    const Matrix phi = evaluate_basis(repr.system, grid);
    return FunctionalDataset(grid, repr.coeffs * phi.transpose());
}

}  // namespace funbench
