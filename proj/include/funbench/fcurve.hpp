#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace funbench {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Strictly increasing sample points on [0, 1] together with their
/// composite-trapezoid quadrature weights.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    /// T equally spaced points 0, 1/(T-1), ..., 1.
    static Grid uniform(std::size_t count);
    /// Affine map of strictly increasing raw abscissae onto [0, 1].
    static Grid rescaled(const std::vector<double>& raw);

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<double>& points() const noexcept { return points_; }
    double operator[](std::size_t j) const { return points_[j]; }
    const Vector& weights() const noexcept { return weights_; }

    bool operator==(const Grid& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
    Vector weights_;
};

/// One curve observed on a grid.
class FunctionalSample {
public:
    FunctionalSample() = default;
    explicit FunctionalSample(Vector values);

    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    const Vector& values() const noexcept { return values_; }
    double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }

private:
    Vector values_;
};

/// n curves on a shared grid, one curve per row.
class FunctionalDataset {
public:
    FunctionalDataset(Grid grid, Matrix curves);

    const Grid& grid() const noexcept { return grid_; }
    const Matrix& curves() const noexcept { return curves_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(curves_.rows()); }
    std::size_t length() const noexcept { return grid_.size(); }

    FunctionalSample curve(std::size_t i) const;
    FunctionalDataset subset(const std::vector<std::size_t>& rows) const;

private:
    Grid grid_;
    Matrix curves_;
};

enum class ResponseKind { Continuous, Binary };

struct ScalarResponses {
    ScalarResponses() = default;
    ScalarResponses(Vector values, ResponseKind kind = ResponseKind::Continuous);

    std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
    ScalarResponses subset(const std::vector<std::size_t>& rows) const;

    Vector values;
    ResponseKind kind = ResponseKind::Continuous;
};

/// Trapezoidal approximation of the integral of f*g over the grid.
double inner_product(const FunctionalSample& f, const FunctionalSample& g, const Grid& grid);
double inner_product(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g, const Grid& grid);

double l2_distance(const FunctionalSample& f, const FunctionalSample& g, const Grid& grid);
double l2_distance(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g, const Grid& grid);

FunctionalSample mean_curve(const FunctionalDataset& ds);

}  // namespace funbench
