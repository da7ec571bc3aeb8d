#include "funbench/simgen.hpp"

#include <cmath>

#include "funbench/csv.hpp"
#include "funbench/errors.hpp"
#include "funbench/freg.hpp"
#include "funbench/rng.hpp"

namespace funbench {

namespace {

using Eigen::Index;

constexpr std::pair<SimCase, const char*> kCaseNames[] = {
    {SimCase::Linear, "linear"}, {SimCase::Sin, "sin"}, {SimCase::BinLinear, "bin-linear"},
    {SimCase::BinSin, "bin-sin"}, {SimCase::CL, "CL"},  {SimCase::CNL, "CNL"},
    {SimCase::NCL, "NCL"},       {SimCase::NCNL, "NCNL"},
};

StreamRole role_for(SimPart part, StreamRole train_role) {
    if (part == SimPart::Train) return train_role;
    switch (train_role) {
        case StreamRole::Scores: return StreamRole::TestScores;
        case StreamRole::Noise: return StreamRole::TestNoise;
        case StreamRole::Labels: return StreamRole::TestLabels;
        default: return train_role;
    }
}

Rng stream(const SimSpec& spec, SimPart part, StreamRole role) {
    return Rng(spec.seed, static_cast<std::uint64_t>(role_for(part, role)));
}

void check_scores(const SimPredictors& x, const SimSpec& spec) {
    if (static_cast<std::size_t>(x.scores.cols()) != spec.q) {
        throw DimensionError("predictors carry " + std::to_string(x.scores.cols()) + " scores per curve, spec has q = " +
                             std::to_string(spec.q));
    }
    if (x.scores.rows() != x.curves.curves().rows()) throw DimensionError("scores and curves disagree on n");
}

/// Per-curve integral of X against sum_k w_k phi_k, exact by orthonormality.
Vector score_integral(const Matrix& scores, const Vector& weights) { return scores * weights; }

Vector harmonic_weights(std::size_t q) {
    Vector w(static_cast<Index>(q));
    for (std::size_t k = 1; k <= q; ++k) w[static_cast<Index>(k - 1)] = 1.0 / static_cast<double>(k);
    return w;
}

}  // namespace

std::string to_string(SimCase c) {
    for (const auto& [value, name] : kCaseNames)
        if (value == c) return name;
    return "unknown";
}

SimCase sim_case_from_string(const std::string& name) {
    for (const auto& [value, text] : kCaseNames)
        if (name == text) return value;
    throw InvalidArgument("unknown simulation case '" + name +
                          "' (expected linear, sin, bin-linear, bin-sin, CL, CNL, NCL or NCNL)");
}

bool is_binary(SimCase c) noexcept { return c == SimCase::BinLinear || c == SimCase::BinSin; }

bool is_functional(SimCase c) noexcept {
    return c == SimCase::CL || c == SimCase::CNL || c == SimCase::NCL || c == SimCase::NCNL;
}

double SimSpec::effective_noise_sd() const {
    if (noise_sd) return *noise_sd;
    return is_functional(sim_case) ? 0.1 : 0.5;
}

void SimSpec::validate() const {
    if (q < 1) throw InvalidArgument("q must be at least 1");
    if (T < 2) throw InvalidArgument("T must be at least 2");
    if (n_train < 1 || n_test < 1) throw InvalidArgument("sample sizes must be at least 1");
    if (!(coef_sd >= 0.0) || !std::isfinite(coef_sd)) throw InvalidArgument("coef_sd must be finite and nonnegative");
    const double e = effective_noise_sd();
    if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidArgument("noise_sd must be finite and nonnegative");
}

SimPredictors gen_predictors(const SimSpec& spec, SimPart part) {
    spec.validate();
    const std::size_t n = spec.sample_size(part);
    const Grid grid = Grid::uniform(spec.T);
    Rng rng = stream(spec, part, StreamRole::Scores);
    Matrix scores(static_cast<Index>(n), static_cast<Index>(spec.q));
    for (Index i = 0; i < scores.rows(); ++i)
        for (Index k = 0; k < scores.cols(); ++k) scores(i, k) = rng.normal(0.0, spec.coef_sd);
    const Matrix phi = evaluate_basis(BasisSystem(spec.q), grid);
    Matrix curves = scores * phi.transpose();
    return {FunctionalDataset(grid, std::move(curves)), std::move(scores)};
}

Vector true_beta(std::size_t q, const Grid& grid) {
    return evaluate_basis(BasisSystem(q), grid) * harmonic_weights(q);
}

ScalarDraw gen_scalar_response(const SimPredictors& x, const SimSpec& spec, SimPart part) {
    check_scores(x, spec);
    if (spec.sim_case != SimCase::Linear && spec.sim_case != SimCase::Sin) {
        throw InvalidArgument("gen_scalar_response needs the linear or sin case, got " + to_string(spec.sim_case));
    }
    Vector signal = score_integral(x.scores, harmonic_weights(spec.q));
    if (spec.sim_case == SimCase::Sin) signal = signal.array().sin().matrix();
    Rng rng = stream(spec, part, StreamRole::Noise);
    const double sd = spec.effective_noise_sd();
    Vector y = signal;
    for (Index i = 0; i < y.size(); ++i) y[i] += rng.normal(0.0, sd);
    return {ScalarResponses(std::move(y)), std::move(signal)};
}

ScalarDraw gen_binary_response(const SimPredictors& x, const SimSpec& spec, SimPart part) {
    check_scores(x, spec);
    if (!is_binary(spec.sim_case)) {
        throw InvalidArgument("gen_binary_response needs a binary case, got " + to_string(spec.sim_case));
    }
    Vector p = score_integral(x.scores, harmonic_weights(spec.q));
    if (spec.sim_case == SimCase::BinSin) p = p.array().sin().matrix();
    Vector prob(p.size());
    for (Index i = 0; i < p.size(); ++i) prob[i] = expit(p[i]);
    Rng rng = stream(spec, part, StreamRole::Labels);
    Vector labels(p.size());
    for (Index i = 0; i < p.size(); ++i) labels[i] = rng.bernoulli(prob[i]) ? 1.0 : 0.0;
    return {ScalarResponses(std::move(labels), ResponseKind::Binary), std::move(prob)};
}

FunctionalDraw gen_functional_response(const SimPredictors& x, const SimSpec& spec, SimPart part) {
    check_scores(x, spec);
    if (!is_functional(spec.sim_case)) {
        throw InvalidArgument("gen_functional_response needs a functional case, got " + to_string(spec.sim_case));
    }
    const Grid& grid = x.curves.grid();
    if (grid.size() != spec.T) throw DimensionError("predictor grid length differs from spec T");
    const Matrix phi = evaluate_basis(BasisSystem(spec.q), grid);
    const auto q = static_cast<double>(spec.q);

    Matrix signal;
    if (spec.sim_case == SimCase::CL || spec.sim_case == SimCase::CNL) {
        const Vector beta = phi * harmonic_weights(spec.q);
        signal = x.curves.curves().array().rowwise() * beta.transpose().array();
    } else {
        Vector w1(static_cast<Index>(spec.q));
        Vector w2(static_cast<Index>(spec.q));
        for (std::size_t k = 1; k <= spec.q; ++k) {
            w1[static_cast<Index>(k - 1)] = static_cast<double>(k) / q;
            w2[static_cast<Index>(k - 1)] = (q - static_cast<double>(k) + 1.0) / q;
        }
        const Vector beta1 = phi * w1;
        const Vector inner = score_integral(x.scores, w2);
        signal = inner * beta1.transpose();
    }
    if (spec.sim_case == SimCase::CNL || spec.sim_case == SimCase::NCNL) signal = signal.array().sin().matrix();

    Rng rng = stream(spec, part, StreamRole::Noise);
    const double sd = spec.effective_noise_sd();
    Matrix y = signal;
    for (Index i = 0; i < y.rows(); ++i)
        for (Index j = 0; j < y.cols(); ++j) y(i, j) += rng.normal(0.0, sd);
    return {FunctionalDataset(grid, std::move(y)), std::move(signal)};
}

Matrix SimData::response_matrix() const {
    if (scalar) return scalar->response.values;
    return functional->response.curves();
}

Matrix SimData::signal_matrix() const {
    if (scalar) return scalar->signal;
    return functional->signal;
}

SimData simulate(const SimSpec& spec, SimPart part) {
    SimData out{gen_predictors(spec, part), std::nullopt, std::nullopt};
    if (is_functional(spec.sim_case)) {
        out.functional = gen_functional_response(out.predictors, spec, part);
    } else if (is_binary(spec.sim_case)) {
        out.scalar = gen_binary_response(out.predictors, spec, part);
    } else {
        out.scalar = gen_scalar_response(out.predictors, spec, part);
    }
    return out;
}

void write_sim_csv(const SimData& data, const std::string& path) {
    const std::size_t T = data.x().length();
    std::vector<std::string> header = numbered_columns("x", T);
    const Matrix response = data.response_matrix();
    const Matrix signal = data.signal_matrix();
    if (data.scalar) {
        header.emplace_back("y");
        header.emplace_back("signal");
    } else {
        for (auto& c : numbered_columns("y", T)) header.push_back(std::move(c));
        for (auto& c : numbered_columns("signal", T)) header.push_back(std::move(c));
    }
    Matrix all(data.x().curves().rows(), static_cast<Index>(header.size()));
    all << data.x().curves(), response, signal;
    write_csv(path, header, all);
}

}  // namespace funbench
