#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "funbench/basis.hpp"
#include "funbench/fcurve.hpp"

namespace funbench {

inline constexpr std::size_t kDefaultBasisSize = 9;
inline constexpr double kDefaultRidge = 1e-8;
inline constexpr double kDefaultFve = 0.99;

// ---------------------------------------------------------------------------
// Scalar-on-function linear model, basis route.

struct FlmBasisModel {
    Vector beta_coeffs;
    double intercept = 0.0;
    BasisSystem system{kDefaultBasisSize};
    double ridge = kDefaultRidge;

    Vector predict(const FunctionalDataset& x) const;
};

/// Smooths X onto q_est Fourier functions and regresses y on the
/// coefficients. Because the basis is orthonormal, the coefficient dot
/// product equals the integral of X times beta.
FlmBasisModel fit_flm_basis(const FunctionalDataset& x, const ScalarResponses& y,
                            std::size_t q_est = kDefaultBasisSize, double ridge = kDefaultRidge);

// ---------------------------------------------------------------------------
// Scalar-on-function linear model, functional principal components route.

struct FpcaModel {
    Grid grid;
    FunctionalSample mean;
    Matrix eigenfunctions;  // K x T, orthonormal under grid quadrature
    Vector eigenvalues;     // length K, nonincreasing
    Vector score_coefficients;
    double intercept = 0.0;
    double fve_threshold = kDefaultFve;

    std::size_t components() const noexcept { return static_cast<std::size_t>(eigenfunctions.rows()); }
    Matrix scores(const FunctionalDataset& x) const;
    Vector predict(const FunctionalDataset& x) const;
};

FpcaModel fit_flm_fpca(const FunctionalDataset& x, const ScalarResponses& y, double fve = kDefaultFve);

// ---------------------------------------------------------------------------
// Functional logistic regression with the expit link.

struct LogisticFlmModel {
    Vector beta_coeffs;
    double intercept = 0.0;
    BasisSystem system{kDefaultBasisSize};
    double ridge = kDefaultRidge;

    // Fit metadata.
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> objective_trace;  // penalized negative log-likelihood per iterate

    /// Linear predictor intercept + <x-coeffs, beta>.
    Vector linear_predictor(const FunctionalDataset& x) const;
    /// P(Y = 1 | X), strictly inside (0, 1).
    Vector predict_proba(const FunctionalDataset& x) const;
};

double expit(double p);

/// IRLS (damped Newton) on the penalized Bernoulli likelihood
///   sum softplus(eta_i) - y_i eta_i + ridge/2 ||beta||^2.
/// Stops at gradient norm <= 1e-8 or after 100 iterations.
LogisticFlmModel fit_logistic_flm(const FunctionalDataset& x, const ScalarResponses& y,
                                  std::size_t q_est = kDefaultBasisSize, double ridge = kDefaultRidge);

// ---------------------------------------------------------------------------
// Functional Nadaraya-Watson regression.

struct KernelNpModel {
    FunctionalDataset train;
    Vector responses;
    double bandwidth = 1.0;
    std::vector<double> candidate_bandwidths;  // empty when the bandwidth was fixed
    std::vector<double> cv_errors;

    Vector predict(const FunctionalDataset& x) const;
};

/// Gaussian-kernel weighted mean of `responses` given distances to the
/// query. Weights are shifted by the smallest distance, which leaves the
/// ratio unchanged and keeps at least one weight equal to 1.
double nadaraya_watson(const Eigen::Ref<const Vector>& distances, const Eigen::Ref<const Vector>& responses,
                       double bandwidth);

struct KernelNpOptions {
    std::optional<double> bandwidth;  // skip cross-validation when set
    std::size_t grid_size = 20;
    double low_factor = 0.1;
    double high_factor = 10.0;
};

KernelNpModel fit_kernel_np(const FunctionalDataset& x, const ScalarResponses& y, const KernelNpOptions& options = {});

/// Symmetric n x n matrix of L2 distances between rows.
Matrix pairwise_distances(const FunctionalDataset& x);

// ---------------------------------------------------------------------------
// Concurrent function-on-function model Y(t) = alpha(t) + beta(t) X(t).

struct ConcurrentModel {
    Grid grid;
    FunctionalSample alpha;
    FunctionalSample beta;

    FunctionalDataset predict(const FunctionalDataset& x) const;
};

ConcurrentModel fit_concurrent(const FunctionalDataset& x, const FunctionalDataset& y);

// ---------------------------------------------------------------------------
// Non-concurrent linear model Y(t) = alpha(t) + int beta(t,s) X(s) ds with
// beta(t,s) = sum_{j,k} B_jk phi_j(t) phi_k(s).

struct FfLinearModel {
    Matrix coefficient_kernel;  // B, q_t x q_s
    Vector alpha_coeffs;        // q_t
    BasisSystem system_s{kDefaultBasisSize};
    BasisSystem system_t{kDefaultBasisSize};
    Grid response_grid;
    double ridge = kDefaultRidge;

    FunctionalDataset predict(const FunctionalDataset& x) const;
};

FfLinearModel fit_ff_linear(const FunctionalDataset& x, const FunctionalDataset& y,
                            std::size_t q_s = kDefaultBasisSize, std::size_t q_t = kDefaultBasisSize,
                            double ridge = kDefaultRidge);

}  // namespace funbench
