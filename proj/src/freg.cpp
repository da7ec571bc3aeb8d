#include "funbench/freg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "funbench/errors.hpp"
#include "funbench/linalg.hpp"

namespace funbench {

namespace {

void require_rows(std::size_t curves, std::size_t responses) {
    if (curves != responses) {
        throw DimensionError(std::to_string(curves) + " curves but " + std::to_string(responses) + " responses");
    }
}

void require_basis_fits(std::size_t q, const Grid& grid, const char* what) {
    if (q < 1 || q > grid.size()) {
        throw InvalidArgument(std::string(what) + " basis size " + std::to_string(q) + " must be in [1, " +
                              std::to_string(grid.size()) + "]");
    }
}

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

// ---------------------------------------------------------------------------

Vector FlmBasisModel::predict(const FunctionalDataset& x) const {
    const Matrix c = smooth_coefficients(x.curves(), x.grid(), system, ridge);
    return (c * beta_coeffs).array() + intercept;
}

FlmBasisModel fit_flm_basis(const FunctionalDataset& x, const ScalarResponses& y, std::size_t q_est, double ridge) {
    require_rows(x.n(), y.size());
    require_basis_fits(q_est, x.grid(), "estimation");
    BasisSystem system(q_est);
    const Matrix c = smooth_coefficients(x.curves(), x.grid(), system, ridge);
    const Matrix theta = ridge_least_squares(with_intercept(c), y.values, ridge, true);

    FlmBasisModel model;
    model.intercept = theta(0, 0);
    model.beta_coeffs = theta.col(0).tail(static_cast<Eigen::Index>(q_est));
    model.system = system;
    model.ridge = ridge;
    return model;
}

// ---------------------------------------------------------------------------

Matrix FpcaModel::scores(const FunctionalDataset& x) const {
    if (!(x.grid() == grid)) throw DimensionError("FPCA prediction requires the training grid");
    const Matrix centered = x.curves().rowwise() - mean.values().transpose();
    return centered * grid.weights().asDiagonal() * eigenfunctions.transpose();
}

Vector FpcaModel::predict(const FunctionalDataset& x) const {
    return (scores(x) * score_coefficients).array() + intercept;
}

FpcaModel fit_flm_fpca(const FunctionalDataset& x, const ScalarResponses& y, double fve) {
    require_rows(x.n(), y.size());
    if (x.n() < 2) throw InsufficientDataError("FPCA needs at least 2 curves");
    if (!(fve > 0.0 && fve <= 1.0)) throw InvalidArgument("fve must lie in (0, 1]");

    const Grid& grid = x.grid();
    const FunctionalSample mu = mean_curve(x);
    const Matrix centered = x.curves().rowwise() - mu.values().transpose();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(x.n() - 1);

    // Symmetrized discretization of the covariance operator: W^1/2 C W^1/2.
    const Vector sqrt_w = grid.weights().array().sqrt();
    const Matrix op = sqrt_w.asDiagonal() * cov * sqrt_w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(op);
    if (eig.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");

    // Eigen returns ascending order.
    const Eigen::Index m = op.rows();
    Vector values(m);
    Matrix vectors(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        values[k] = std::max(eig.eigenvalues()[m - 1 - k], 0.0);
        vectors.col(k) = eig.eigenvectors().col(m - 1 - k);
    }

    const double total = values.sum();
    const double floor = 1e-10 * (values.size() > 0 ? values[0] : 0.0);
    Eigen::Index keep = 0;
    if (total > 0.0) {
        double cumulative = 0.0;
        while (keep < m && values[keep] > floor) {
            cumulative += values[keep];
            ++keep;
            if (cumulative / total >= fve - 1e-12) break;
        }
    }

    FpcaModel model{grid, mu, Matrix(keep, m), values.head(keep), Vector::Zero(keep), 0.0, fve};
    for (Eigen::Index k = 0; k < keep; ++k) {
        Vector phi = vectors.col(k).cwiseQuotient(sqrt_w);
        // Fix the sign so the largest-magnitude entry is positive.
        Eigen::Index arg = 0;
        phi.cwiseAbs().maxCoeff(&arg);
        if (phi[arg] < 0.0) phi = -phi;
        model.eigenfunctions.row(k) = phi.transpose();
    }

    const Matrix scores = centered * grid.weights().asDiagonal() * model.eigenfunctions.transpose();
    const Matrix theta = ridge_least_squares(with_intercept(scores), y.values, 0.0, true);
    model.intercept = theta(0, 0);
    model.score_coefficients = theta.col(0).tail(keep);
    return model;
}

// ---------------------------------------------------------------------------

double expit(double p) {
    if (p >= 0.0) return 1.0 / (1.0 + std::exp(-p));
    const double e = std::exp(p);
    return e / (1.0 + e);
}

Vector LogisticFlmModel::linear_predictor(const FunctionalDataset& x) const {
    const Matrix c = smooth_coefficients(x.curves(), x.grid(), system, kDefaultRidge);
    return (c * beta_coeffs).array() + intercept;
}

Vector LogisticFlmModel::predict_proba(const FunctionalDataset& x) const {
    Vector p = linear_predictor(x);
    // Clamp away from the endpoints so probabilities stay strictly inside (0, 1).
    constexpr double eps = 1e-15;
    for (auto& v : p) v = std::clamp(expit(v), eps, 1.0 - eps);
    return p;
}

LogisticFlmModel fit_logistic_flm(const FunctionalDataset& x, const ScalarResponses& y, std::size_t q_est,
                                  double ridge) {
    require_rows(x.n(), y.size());
    require_basis_fits(q_est, x.grid(), "estimation");
    if (y.kind != ResponseKind::Binary) throw InvalidArgument("logistic FLM needs binary responses");
    const double ones = y.values.sum();
    if (ones == 0.0 || ones == static_cast<double>(y.size())) {
        throw DegenerateLabelsError("labels contain a single class");
    }
    if (!(ridge >= 0.0)) throw InvalidArgument("ridge must be nonnegative");

    BasisSystem system(q_est);
    // Coefficients use the default smoothing ridge so that predict() sees the
    // same representation for new curves.
    const Matrix z = with_intercept(smooth_coefficients(x.curves(), x.grid(), system, kDefaultRidge));
    const Eigen::Index p = z.cols();
    Vector penalty = Vector::Constant(p, ridge);
    penalty[0] = 0.0;

    auto objective = [&](const Vector& theta) {
        const Vector eta = z * theta;
        double nll = 0.0;
        for (Eigen::Index i = 0; i < eta.size(); ++i) nll += softplus(eta[i]) - y.values[i] * eta[i];
        return nll + 0.5 * (penalty.array() * theta.array().square()).sum();
    };

    constexpr double kGradTol = 1e-8;
    constexpr std::size_t kMaxIter = 100;

    Vector theta = Vector::Zero(p);
    double current = objective(theta);
    LogisticFlmModel model;
    model.objective_trace.push_back(current);

    for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
        const Vector eta = z * theta;
        Vector prob(eta.size()), weight(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            prob[i] = expit(eta[i]);
            weight[i] = prob[i] * (1.0 - prob[i]);
        }
        const Vector grad = z.transpose() * (prob - y.values) + penalty.cwiseProduct(theta);
        if (grad.norm() <= kGradTol) {
            model.converged = true;
            break;
        }
        Matrix hess = z.transpose() * weight.asDiagonal() * z;
        hess.diagonal() += penalty;
        Eigen::LDLT<Matrix> ldlt(hess);
        if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14) {
            hess.diagonal().array() += 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
            ldlt.compute(hess);
        }
        const Vector step = ldlt.solve(grad);

        // Step halving keeps the objective nonincreasing.
        double scale = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving, scale *= 0.5) {
            const Vector candidate = theta - scale * step;
            const double value = objective(candidate);
            if (std::isfinite(value) && value <= current) {
                theta = candidate;
                current = value;
                accepted = true;
                break;
            }
        }
        model.iterations = iter + 1;
        if (!accepted) break;  // no descent available at working precision
        model.objective_trace.push_back(current);
    }
    if (!theta.allFinite()) throw NumericalError("logistic FLM produced non-finite parameters");

    model.intercept = theta[0];
    model.beta_coeffs = theta.tail(p - 1);
    model.system = system;
    model.ridge = ridge;
    return model;
}

// ---------------------------------------------------------------------------

double nadaraya_watson(const Eigen::Ref<const Vector>& distances, const Eigen::Ref<const Vector>& responses,
                       double bandwidth) {
    if (distances.size() != responses.size() || distances.size() == 0) {
        throw DimensionError("distance and response vectors must be nonempty and aligned");
    }
    if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be positive");
    const double dmin = distances.minCoeff();
    const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index i = 0; i < distances.size(); ++i) {
        const double w = std::exp(-(distances[i] * distances[i] - dmin * dmin) * inv);
        num += w * responses[i];
        den += w;
    }
    return num / den;
}

Matrix pairwise_distances(const FunctionalDataset& x) {
    const auto n = static_cast<Eigen::Index>(x.n());
    Matrix d = Matrix::Zero(n, n);
    const Matrix& c = x.curves();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d(i, j) = d(j, i) = l2_distance(c.row(i).transpose(), c.row(j).transpose(), x.grid());
        }
    }
    return d;
}

Vector KernelNpModel::predict(const FunctionalDataset& x) const {
    if (!(x.grid() == train.grid())) throw DimensionError("kernel prediction requires the training grid");
    const auto n = static_cast<Eigen::Index>(train.n());
    Vector out(static_cast<Eigen::Index>(x.n()));
    Vector dist(n);
    for (Eigen::Index r = 0; r < out.size(); ++r) {
        for (Eigen::Index i = 0; i < n; ++i) {
            dist[i] = l2_distance(x.curves().row(r).transpose(), train.curves().row(i).transpose(), train.grid());
        }
        out[r] = nadaraya_watson(dist, responses, bandwidth);
    }
    return out;
}

KernelNpModel fit_kernel_np(const FunctionalDataset& x, const ScalarResponses& y, const KernelNpOptions& options) {
    require_rows(x.n(), y.size());
    if (x.n() < 2) throw InsufficientDataError("kernel regression needs at least 2 curves");
    KernelNpModel model{x, y.values, 1.0, {}, {}};
    if (options.bandwidth) {
        if (!(*options.bandwidth > 0.0)) throw InvalidArgument("bandwidth must be positive");
        model.bandwidth = *options.bandwidth;
        return model;
    }
    if (options.grid_size < 1) throw InvalidArgument("bandwidth grid must be nonempty");

    const Matrix dist = pairwise_distances(x);
    const auto n = dist.rows();
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) upper.push_back(dist(i, j));
    std::sort(upper.begin(), upper.end());
    const std::size_t m = upper.size();
    const double median = m % 2 == 1 ? upper[m / 2] : 0.5 * (upper[m / 2 - 1] + upper[m / 2]);
    if (!(median > 0.0)) throw DegenerateDistanceError("median pairwise distance is zero");

    const double lo = std::log(options.low_factor * median);
    const double hi = std::log(options.high_factor * median);
    const std::size_t count = options.grid_size;
    double best = std::numeric_limits<double>::infinity();
    Vector others_d(n - 1), others_y(n - 1);
    for (std::size_t g = 0; g < count; ++g) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(g) / static_cast<double>(count - 1);
        const double h = std::exp(lo + frac * (hi - lo));
        double sse = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index k = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                others_d[k] = dist(i, j);
                others_y[k] = y.values[j];
                ++k;
            }
            const double r = nadaraya_watson(others_d, others_y, h) - y.values[i];
            sse += r * r;
        }
        const double err = sse / static_cast<double>(n);
        model.candidate_bandwidths.push_back(h);
        model.cv_errors.push_back(err);
        if (err < best) {
            best = err;
            model.bandwidth = h;
        }
    }
    return model;
}

// ---------------------------------------------------------------------------

FunctionalDataset ConcurrentModel::predict(const FunctionalDataset& x) const {
    if (!(x.grid() == grid)) throw DimensionError("concurrent prediction requires the training grid");
    Matrix out = x.curves() * beta.values().asDiagonal();
    out.rowwise() += alpha.values().transpose();
    return FunctionalDataset(grid, std::move(out));
}

ConcurrentModel fit_concurrent(const FunctionalDataset& x, const FunctionalDataset& y) {
    require_rows(x.n(), y.n());
    if (!(x.grid() == y.grid())) throw DimensionError("concurrent model needs X and Y on the same grid");
    if (x.n() < 2) throw InsufficientDataError("concurrent model needs at least 2 curve pairs");
    const auto len = static_cast<Eigen::Index>(x.length());
    Vector alpha(len), beta(len);
    const Vector xbar = x.curves().colwise().mean();
    const Vector ybar = y.curves().colwise().mean();
    for (Eigen::Index j = 0; j < len; ++j) {
        const Vector dx = x.curves().col(j).array() - xbar[j];
        const Vector dy = y.curves().col(j).array() - ybar[j];
        const double sxx = dx.squaredNorm();
        const double scale = x.curves().col(j).squaredNorm();
        if (!(sxx > 1e-14 * scale) || sxx == 0.0) {
            throw SingularDesignError("X has zero variance at grid point " + std::to_string(j));
        }
        beta[j] = dx.dot(dy) / sxx;
        alpha[j] = ybar[j] - beta[j] * xbar[j];
    }
    return ConcurrentModel{x.grid(), FunctionalSample(alpha), FunctionalSample(beta)};
}

// ---------------------------------------------------------------------------

FunctionalDataset FfLinearModel::predict(const FunctionalDataset& x) const {
    const Matrix xc = smooth_coefficients(x.curves(), x.grid(), system_s, ridge);
    Matrix yc = xc * coefficient_kernel.transpose();
    yc.rowwise() += alpha_coeffs.transpose();
    return reconstruct(CoefficientRepr(std::move(yc), system_t), response_grid);
}

FfLinearModel fit_ff_linear(const FunctionalDataset& x, const FunctionalDataset& y, std::size_t q_s, std::size_t q_t,
                            double ridge) {
    require_rows(x.n(), y.n());
    require_basis_fits(q_s, x.grid(), "predictor");
    require_basis_fits(q_t, y.grid(), "response");
    const BasisSystem sys_s(q_s), sys_t(q_t);
    const Matrix xc = smooth_coefficients(x.curves(), x.grid(), sys_s, ridge);
    const Matrix yc = smooth_coefficients(y.curves(), y.grid(), sys_t, ridge);
    const Matrix theta = ridge_least_squares(with_intercept(xc), yc, ridge, true);

    FfLinearModel model{theta.bottomRows(static_cast<Eigen::Index>(q_s)).transpose(),
                        theta.row(0).transpose(),
                        sys_s,
                        sys_t,
                        y.grid(),
                        ridge};
    return model;
}

}  // namespace funbench
