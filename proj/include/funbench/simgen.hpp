#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "funbench/basis.hpp"
#include "funbench/fcurve.hpp"

namespace funbench {

enum class SimCase { Linear, Sin, BinLinear, BinSin, CL, CNL, NCL, NCNL };

std::string to_string(SimCase c);
SimCase sim_case_from_string(const std::string& name);

bool is_binary(SimCase c) noexcept;
bool is_functional(SimCase c) noexcept;

/// Which half of a simulated experiment a draw belongs to. Train and test
/// samples come from disjoint random streams of the same seed.
enum class SimPart { Train, Test };

struct SimSpec {
    SimCase sim_case = SimCase::Linear;
    std::size_t q = 5;
    std::size_t n_train = 200;
    std::size_t n_test = 50;
    std::size_t T = 100;
    double coef_sd = 0.5;
    /// Unset means 0.5 for scalar cases and 0.1 for functional cases.
    std::optional<double> noise_sd;
    std::uint64_t seed = 0;

    double effective_noise_sd() const;
    std::size_t sample_size(SimPart part) const noexcept { return part == SimPart::Train ? n_train : n_test; }
    void validate() const;
};

/// Predictor curves together with the Fourier scores that generated them.
struct SimPredictors {
    FunctionalDataset curves;
    Matrix scores;  // n x q
};

struct ScalarDraw {
    ScalarResponses response;
    Vector signal;  // noiseless response; P(Y = 1) for binary cases
};

struct FunctionalDraw {
    FunctionalDataset response;
    Matrix signal;  // noiseless response curves
};

/// X_i(t_j) = sum_k x_ik phi_k(t_j) with x_ik ~ Normal(0, sd = coef_sd) on a
/// uniform grid of T points.
SimPredictors gen_predictors(const SimSpec& spec, SimPart part = SimPart::Train);

/// beta(t) = sum_k (1/k) phi_k(t), evaluated on the grid.
Vector true_beta(std::size_t q, const Grid& grid);

/// Linear: y = int X beta + e; Sin: y = sin(int X beta) + e. The integral is
/// the exact coefficient sum sum_k x_ik / k.
ScalarDraw gen_scalar_response(const SimPredictors& x, const SimSpec& spec, SimPart part = SimPart::Train);

/// Y ~ Bernoulli(expit(p)) with p = int X beta (BinLinear) or sin of it (BinSin).
ScalarDraw gen_binary_response(const SimPredictors& x, const SimSpec& spec, SimPart part = SimPart::Train);

/// CL, CNL, NCL, NCNL responses with white Gaussian noise on the grid.
FunctionalDraw gen_functional_response(const SimPredictors& x, const SimSpec& spec, SimPart part = SimPart::Train);

/// One complete simulated sample. Exactly one of `scalar` and `functional`
/// is set, according to the case.
struct SimData {
    SimPredictors predictors;
    std::optional<ScalarDraw> scalar;
    std::optional<FunctionalDraw> functional;

    const FunctionalDataset& x() const noexcept { return predictors.curves; }
    std::size_t n() const noexcept { return predictors.curves.n(); }
    /// Responses as an n x 1 (scalar) or n x T (functional) matrix.
    Matrix response_matrix() const;
    Matrix signal_matrix() const;
};

SimData simulate(const SimSpec& spec, SimPart part = SimPart::Train);

/// CSV with columns x1..xT then y (scalar) or y1..yT (functional), followed
/// by the noiseless signal in columns signal or signal1..signalT.
void write_sim_csv(const SimData& data, const std::string& path);

}  // namespace funbench
