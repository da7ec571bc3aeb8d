#include "funbench/fcurve.hpp"

#include <cmath>
#include <string>

#include "funbench/errors.hpp"

namespace funbench {

namespace {

Vector trapezoid_weights(const std::vector<double>& t) {
    const std::size_t m = t.size();
    Vector w = Vector::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double h = 0.5 * (t[j + 1] - t[j]);
        w[static_cast<Eigen::Index>(j)] += h;
        w[static_cast<Eigen::Index>(j + 1)] += h;
    }
    return w;
}

void require_same_length(std::size_t a, std::size_t b, std::size_t grid) {
    if (a != b || a != grid) {
        throw DimensionError("curve lengths " + std::to_string(a) + " and " + std::to_string(b) +
                             " do not match grid length " + std::to_string(grid));
    }
}

}  // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw InvalidArgument("grid needs at least 2 points");
    for (std::size_t j = 0; j < points_.size(); ++j) {
        const double t = points_[j];
        if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
            throw InvalidArgument("grid point " + std::to_string(j) + " outside [0,1]");
        }
        if (j > 0 && !(t > points_[j - 1])) {
            throw InvalidArgument("grid points must be strictly increasing (index " + std::to_string(j) + ")");
        }
    }
    weights_ = trapezoid_weights(points_);
}

Grid Grid::uniform(std::size_t count) {
    if (count < 2) throw InvalidArgument("grid needs at least 2 points");
    std::vector<double> t(count);
    for (std::size_t j = 0; j < count; ++j) t[j] = static_cast<double>(j) / static_cast<double>(count - 1);
    t.back() = 1.0;
    return Grid(std::move(t));
}

Grid Grid::rescaled(const std::vector<double>& raw) {
    if (raw.size() < 2) throw InvalidArgument("grid needs at least 2 points");
    const double lo = raw.front();
    const double span = raw.back() - lo;
    if (!(span > 0.0)) throw InvalidArgument("raw abscissae must be increasing");
    std::vector<double> t(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) t[j] = (raw[j] - lo) / span;
    t.front() = 0.0;
    t.back() = 1.0;
    return Grid(std::move(t));
}

FunctionalSample::FunctionalSample(Vector values) : values_(std::move(values)) {
    if (!values_.allFinite()) throw DataError("functional sample contains non-finite values");
}

FunctionalDataset::FunctionalDataset(Grid grid, Matrix curves) : grid_(std::move(grid)), curves_(std::move(curves)) {
    if (curves_.rows() < 1) throw EmptyInputError("dataset needs at least one curve");
    if (static_cast<std::size_t>(curves_.cols()) != grid_.size()) {
        throw DimensionError("dataset has " + std::to_string(curves_.cols()) + " columns but grid has " +
                             std::to_string(grid_.size()) + " points");
    }
    if (!curves_.allFinite()) throw DataError("dataset contains non-finite values");
}

FunctionalSample FunctionalDataset::curve(std::size_t i) const {
    return FunctionalSample(curves_.row(static_cast<Eigen::Index>(i)).transpose());
}

FunctionalDataset FunctionalDataset::subset(const std::vector<std::size_t>& rows) const {
    Matrix out(static_cast<Eigen::Index>(rows.size()), curves_.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= n()) throw DimensionError("row index " + std::to_string(rows[r]) + " out of range");
        out.row(static_cast<Eigen::Index>(r)) = curves_.row(static_cast<Eigen::Index>(rows[r]));
    }
    return FunctionalDataset(grid_, std::move(out));
}

ScalarResponses::ScalarResponses(Vector v, ResponseKind k) : values(std::move(v)), kind(k) {
    if (!values.allFinite()) throw DataError("responses contain non-finite values");
    if (kind == ResponseKind::Binary) {
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            if (values[i] != 0.0 && values[i] != 1.0) {
                throw DataError("binary response " + std::to_string(i) + " is not 0/1");
            }
        }
    }
}

ScalarResponses ScalarResponses::subset(const std::vector<std::size_t>& rows) const {
    Vector out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= size()) throw DimensionError("row index " + std::to_string(rows[r]) + " out of range");
        out[static_cast<Eigen::Index>(r)] = values[static_cast<Eigen::Index>(rows[r])];
    }
    return ScalarResponses(std::move(out), kind);
}

double inner_product(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g, const Grid& grid) {
    require_same_length(static_cast<std::size_t>(f.size()), static_cast<std::size_t>(g.size()), grid.size());
    return (f.array() * g.array() * grid.weights().array()).sum();
}

double inner_product(const FunctionalSample& f, const FunctionalSample& g, const Grid& grid) {
    return inner_product(f.values(), g.values(), grid);
}

double l2_distance(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g, const Grid& grid) {
    require_same_length(static_cast<std::size_t>(f.size()), static_cast<std::size_t>(g.size()), grid.size());
    const double sq = ((f - g).array().square() * grid.weights().array()).sum();
    return std::sqrt(std::max(sq, 0.0));
}

double l2_distance(const FunctionalSample& f, const FunctionalSample& g, const Grid& grid) {
    return l2_distance(f.values(), g.values(), grid);
}

FunctionalSample mean_curve(const FunctionalDataset& ds) {
    return FunctionalSample(ds.curves().colwise().mean().transpose());
}

}  // namespace funbench
