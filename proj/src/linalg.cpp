#include "funbench/linalg.hpp"

#include <cmath>
#include <string>

#include "funbench/errors.hpp"

namespace funbench {

Matrix with_intercept(const Matrix& design) {
    Matrix z(design.rows(), design.cols() + 1);
    z.col(0).setOnes();
    z.rightCols(design.cols()) = design;
    return z;
}

Matrix ridge_least_squares(const Matrix& design, const Matrix& targets, double ridge, bool free_first) {
    if (design.rows() != targets.rows()) {
        throw DimensionError("design has " + std::to_string(design.rows()) + " rows, targets have " +
                             std::to_string(targets.rows()));
    }
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge must be a finite nonnegative number");
    if (!design.allFinite() || !targets.allFinite()) throw DataError("non-finite regression inputs");

    const Eigen::Index n = design.rows();
    const Eigen::Index p = design.cols();
    Matrix aug_z = Matrix::Zero(n + p, p);
    Matrix aug_y = Matrix::Zero(n + p, targets.cols());
    aug_z.topRows(n) = design;
    aug_y.topRows(n) = targets;
    if (ridge > 0.0) {
        const double s = std::sqrt(ridge);
        for (Eigen::Index k = free_first ? 1 : 0; k < p; ++k) aug_z(n + k, k) = s;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(aug_z);
    qr.setThreshold(1e-12);
    if (qr.rank() < p) {
        throw SingularDesignError("regression design has rank " + std::to_string(qr.rank()) + " < " +
                                  std::to_string(p));
    }
    return qr.solve(aug_y);
}

}  // namespace funbench
