#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/StdVector>

namespace funbench::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Shape = std::vector<std::size_t>;
/// Storage aligned like Eigen's own allocations, so vectorized kernels see
/// the same memory layout on every thread.
using Buffer = std::vector<double, Eigen::aligned_allocator<double>>;

std::string shape_string(const Shape& shape);
std::size_t shape_product(const Shape& shape);

/// Dense row-major array of doubles.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> data);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    /// Same storage, new shape with an equal element count.
    Tensor reshaped(Shape shape) const;

    /// View as a (size / cols) x cols row-major matrix.
    Eigen::Map<RowMatrix> matrix(std::size_t cols);
    Eigen::Map<const RowMatrix> matrix(std::size_t cols) const;

    bool all_finite() const;
    bool operator==(const Tensor&) const = default;

private:
    Shape shape_;
    Buffer data_;
};

}  // namespace funbench::nn
