#include "funbench/neuro/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "funbench/errors.hpp"

namespace funbench::nn {

std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

std::size_t shape_product(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_product(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(data.begin(), data.end()) {
    if (data_.size() != shape_product(shape_)) {
        throw DimensionError("tensor data has " + std::to_string(data_.size()) + " values for shape " +
                             shape_string(shape_));
    }
}

Tensor Tensor::reshaped(Shape shape) const {
    if (shape_product(shape) != data_.size()) {
        throw DimensionError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    }
    Tensor out;
    out.shape_ = std::move(shape);
    out.data_ = data_;
    return out;
}

Eigen::Map<RowMatrix> Tensor::matrix(std::size_t cols) {
    if (cols == 0 || data_.size() % cols != 0) {
        throw DimensionError("tensor " + shape_string(shape_) + " is not divisible into rows of " + std::to_string(cols));
    }
    return {data_.data(), static_cast<Eigen::Index>(data_.size() / cols), static_cast<Eigen::Index>(cols)};
}

Eigen::Map<const RowMatrix> Tensor::matrix(std::size_t cols) const {
    if (cols == 0 || data_.size() % cols != 0) {
        throw DimensionError("tensor " + shape_string(shape_) + " is not divisible into rows of " + std::to_string(cols));
    }
    return {data_.data(), static_cast<Eigen::Index>(data_.size() / cols), static_cast<Eigen::Index>(cols)};
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace funbench::nn
