#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "funbench/datasets.hpp"
#include "funbench/fcurve.hpp"
#include "funbench/freg.hpp"
#include "funbench/neuro/network.hpp"
#include "funbench/neuro/train.hpp"
#include "funbench/simgen.hpp"

namespace funbench {

// ---------------------------------------------------------------------------
// Metrics

/// Mean of squared elementwise differences. Shapes must match.
double compute_mse(const Eigen::Ref<const Matrix>& pred, const Eigen::Ref<const Matrix>& truth);

struct BinaryMetrics {
    double prob_mse = 0.0;
    double misclassification = 0.0;
};

/// prob_mse = mean (prob - label)^2; class 1 is predicted when prob >= 0.5.
BinaryMetrics compute_binary_metrics(const Eigen::Ref<const Vector>& prob, const Eigen::Ref<const Vector>& labels);

// ---------------------------------------------------------------------------
// Models

enum class TableKind { Scalar, Binary, FuncResp, Tecator, Aemet };

std::string to_string(TableKind t);
TableKind table_from_string(const std::string& name);

/// Models a table accepts, in default report order.
std::vector<std::string> default_models(TableKind t);
/// Throws InvalidArgument when `model` cannot run on table `t`.
void check_model(TableKind t, const std::string& model);

struct NeuralSettings {
    nn::TrainingConfig training;
    nn::ArchitectureSizes sizes;
    /// Fit networks to standardized targets and map predictions back.
    bool standardize_targets = true;
};

struct ModelSettings {
    std::size_t q_est = kDefaultBasisSize;
    double ridge = kDefaultRidge;
    double fve = kDefaultFve;
    std::size_t q_s = kDefaultBasisSize;
    std::size_t q_t = kDefaultBasisSize;
    NeuralSettings snn;
    NeuralSettings fnn;
    NeuralSettings dr;
    NeuralSettings cr;

    /// Desk-scale training settings used by the benchmark tables.
    static ModelSettings bench_defaults(TableKind t);
};

/// Fits `model` on (x, y) and predicts at x_test. For binary responses the
/// result is P(Y = 1); for functional responses an n_test x T matrix.
/// `seed` drives network initialization and minibatch order.
Vector fit_predict_scalar(const std::string& model, const FunctionalDataset& x, const ScalarResponses& y,
                          const FunctionalDataset& x_test, const ModelSettings& settings, std::uint64_t seed);
Matrix fit_predict_functional(const std::string& model, const FunctionalDataset& x, const FunctionalDataset& y,
                              const FunctionalDataset& x_test, const ModelSettings& settings, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentPlan {
    TableKind table = TableKind::Scalar;
    std::vector<std::size_t> q_values;  // report rows for the scalar and binary tables
    std::vector<std::size_t> T_values;  // report rows for the functional-response table
    std::size_t scalar_T = 100;          // grid length for the scalar and binary tables
    std::size_t funcresp_q = 21;         // generator q for the functional-response table
    std::vector<SimCase> cases;
    std::vector<std::string> models;
    std::size_t replicates = 50;
    std::uint64_t seed = 1;
    std::size_t n_train = 200;
    std::size_t n_test = 50;
    double coef_sd = 0.5;
    std::optional<double> noise_sd;
    ModelSettings settings;
    /// Worker threads for replicates; results do not depend on this.
    std::size_t threads = 1;

    /// The grid of settings, cases and models of one simulation table.
    static ExperimentPlan defaults(TableKind table, std::size_t replicates, std::uint64_t seed);
    void validate() const;
};

/// Errors of one model in one (setting, case) cell.
struct RunResult {
    std::string setting;    // "q=5" or "T=100"
    std::string case_name;  // "linear", "CL", "tecator", ...
    std::string model;
    std::vector<double> errors;     // one per replicate, NaN where the fit failed
    std::vector<double> secondary;  // misclassification rate (binary table), else empty
    std::vector<double> seconds;    // wall time per replicate
    std::vector<std::string> failures;  // empty string where the fit succeeded

    std::size_t successes() const;
    /// More than 20% of replicates failed.
    bool failed() const;
    /// First recorded failure message, or empty.
    std::string failure_reason() const;
};

/// Label that seeds one cell; shared by every model of the cell so that all
/// models see the same simulated data.
std::string cell_label(TableKind table, const std::string& setting, const std::string& case_name);

std::vector<RunResult> run_experiment(const ExperimentPlan& plan);

struct RealPlan {
    TableKind dataset = TableKind::Tecator;
    /// Tecator: one CSV. Aemet: temperature CSV then precipitation CSV.
    std::vector<std::string> paths;
    std::size_t repeats = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> models;
    ModelSettings settings;
    std::size_t threads = 1;
    /// Row-count check passed to the loader; nullopt accepts fixtures.
    bool require_full_size = true;

    static RealPlan defaults(TableKind dataset, std::vector<std::string> paths, std::size_t repeats,
                             std::uint64_t seed);
};

/// Runs the repeated train/test protocol on a real dataset; errors are test
/// MSE against the observed responses.
std::vector<RunResult> run_real(const RealPlan& plan);

// ---------------------------------------------------------------------------
// Reports

struct ReportRow {
    std::string setting;
    std::string case_name;
    std::string model;
    double mean_mse = 0.0;
    double sd_mse = 0.0;
    std::size_t replicates = 0;  // successful replicates behind the mean
    std::optional<double> misclassification;
    std::string failure;  // empty unless the cell failed

    bool operator==(const ReportRow&) const = default;
};

struct ReportTable {
    bool has_misclassification = false;
    std::vector<ReportRow> rows;

    bool operator==(const ReportTable&) const = default;
    const ReportRow* find(const std::string& setting, const std::string& case_name, const std::string& model) const;
};

/// Mean and sample sd per cell, in the order the results were produced.
ReportTable summarize(const std::vector<RunResult>& results);

enum class ReportFormat { Csv, Markdown };
ReportFormat format_from_string(const std::string& name);

std::string render_report(const ReportTable& table, ReportFormat format);
void emit_report(const ReportTable& table, ReportFormat format, const std::string& path);
ReportTable parse_report_csv(const std::string& path);

}  // namespace funbench
