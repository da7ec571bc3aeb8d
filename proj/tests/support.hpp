#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "funbench/fcurve.hpp"
#include "funbench/rng.hpp"

namespace testing {

using funbench::Matrix;
using funbench::Vector;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double sd = 1.0) {
    funbench::Rng rng(seed, 99);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, sd);
    return m;
}

inline Vector random_vector(Eigen::Index n, std::uint64_t seed, double sd = 1.0) {
    return random_matrix(n, 1, seed, sd).col(0);
}

/// Fourier function k (1-based) written out independently of the library.
inline double fourier(std::size_t k, double t) {
    const double pi = 3.14159265358979323846;
    if (k == 1) return 1.0;
    const double freq = static_cast<double>(k / 2);
    return k % 2 == 0 ? std::sqrt(2.0) * std::sin(2.0 * pi * freq * t) : std::sqrt(2.0) * std::cos(2.0 * pi * freq * t);
}

inline Matrix fourier_matrix(std::size_t q, const funbench::Grid& grid) {
    Matrix phi(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(q));
    for (std::size_t j = 0; j < grid.size(); ++j)
        for (std::size_t k = 1; k <= q; ++k)
            phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k - 1)) = fourier(k, grid[j]);
    return phi;
}

/// Closed-form ridge regression with an unpenalized intercept, solved by an
/// explicit inverse of the normal matrix.
inline Matrix normal_equation_fit(const Matrix& design, const Matrix& targets, double ridge) {
    const Eigen::Index p = design.cols() + 1;
    Matrix z(design.rows(), p);
    z.col(0).setOnes();
    z.rightCols(design.cols()) = design;
    Matrix normal = z.transpose() * z;
    for (Eigen::Index k = 1; k < p; ++k) normal(k, k) += ridge;
    return normal.inverse() * z.transpose() * targets;
}

/// Ridge-smoothed Fourier coefficients from the normal equations.
inline Matrix smoothing_oracle(const Matrix& curves, const funbench::Grid& grid, std::size_t q, double ridge) {
    const Matrix phi = fourier_matrix(q, grid);
    const Matrix normal = phi.transpose() * phi + ridge * Matrix::Identity(phi.cols(), phi.cols());
    return (normal.inverse() * phi.transpose() * curves.transpose()).transpose();
}

/// Unique scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("funbench-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace testing
