#include "funbench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "funbench/csv.hpp"
#include "funbench/errors.hpp"
#include "funbench/rng.hpp"

namespace funbench {

namespace {

using Eigen::Index;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kScalarModels = {"SNN", "FNN", "FLM-basis", "FLM-fpca", "kernel-NP"};
const std::vector<std::string> kBinaryModels = {"SNN", "FNN", "logistic-FLM"};
const std::vector<std::string> kFunctionalModels = {"DR", "CR", "concurrent", "FF-linear"};

bool contains(const std::vector<std::string>& list, const std::string& item) {
    return std::find(list.begin(), list.end(), item) != list.end();
}

std::string join(const std::vector<std::string>& list) {
    std::string out;
    for (const auto& s : list) out += (out.empty() ? "" : ", ") + s;
    return out;
}

// ---------------------------------------------------------------------------
// Network plumbing

nn::Tensor sequence_tensor(const FunctionalDataset& x) {
    const auto n = x.n();
    const auto T = x.length();
    nn::Tensor t({n, T, 1});
    auto m = t.matrix(T);
    m = x.curves();
    return t;
}

struct TargetScaling {
    double mean = 0.0;
    double scale = 1.0;
};

TargetScaling fit_target_scaling(const Matrix& y, bool enabled) {
    if (!enabled) return {};
    const double mean = y.mean();
    const double var = (y.array() - mean).square().mean();
    const double sd = std::sqrt(var);
    return {mean, sd > 1e-12 ? sd : 1.0};
}

nn::Tensor target_tensor(const Matrix& y, const TargetScaling& s) {
    nn::Tensor t({static_cast<std::size_t>(y.rows()), static_cast<std::size_t>(y.cols())});
    t.matrix(static_cast<std::size_t>(y.cols())) = (y.array() - s.mean) / s.scale;
    return t;
}

const NeuralSettings& neural_settings(const std::string& model, const ModelSettings& settings) {
    if (model == "SNN") return settings.snn;
    if (model == "FNN") return settings.fnn;
    if (model == "DR") return settings.dr;
    return settings.cr;
}

nn::Network build_network(const std::string& model, std::size_t steps, std::size_t outputs, nn::LossKind loss,
                          const nn::ArchitectureSizes& sizes) {
    if (model == "SNN") return nn::make_snn(steps, 1, outputs, loss, sizes);
    if (model == "FNN") return nn::make_fnn(steps, 1, outputs, loss, sizes);
    if (model == "DR") return nn::make_dr(steps, 1, sizes);
    if (model == "CR") return nn::make_cr(steps, 1, outputs, sizes);
    throw InvalidArgument("'" + model + "' is not a network model");
}

nn::Network fit_network(const std::string& model, const nn::Tensor& x, const nn::Tensor& y, std::size_t outputs,
                        nn::LossKind loss, const ModelSettings& settings, std::uint64_t seed) {
    const NeuralSettings& ns = neural_settings(model, settings);
    nn::Network net = build_network(model, x.dim(1), outputs, loss, ns.sizes);
    Rng init(derive_seed(seed, model, 0), static_cast<std::uint64_t>(StreamRole::Init));
    nn::initialize(net, init);
    nn::TrainingConfig config = ns.training;
    config.seed = derive_seed(seed, model, 1);
    return nn::train(std::move(net), x, y, config).network;
}

Matrix network_regression(const std::string& model, const FunctionalDataset& x, const Matrix& y,
                          const FunctionalDataset& x_test, const ModelSettings& settings, std::uint64_t seed) {
    const TargetScaling ts = fit_target_scaling(y, neural_settings(model, settings).standardize_targets);
    const auto outputs = static_cast<std::size_t>(y.cols());
    const nn::Network net = fit_network(model, sequence_tensor(x), target_tensor(y, ts), outputs, nn::LossKind::Mse,
                                        settings, seed);
    const nn::Tensor out = net.predict(sequence_tensor(x_test));
    Matrix pred = out.matrix(outputs);
    return (pred.array() * ts.scale + ts.mean).matrix();
}

Vector network_classifier(const std::string& model, const FunctionalDataset& x, const ScalarResponses& y,
                          const FunctionalDataset& x_test, const ModelSettings& settings, std::uint64_t seed) {
    nn::Tensor onehot({y.size(), 2});
    for (std::size_t i = 0; i < y.size(); ++i) onehot[2 * i + (y.values[static_cast<Index>(i)] > 0.5 ? 1 : 0)] = 1.0;
    const nn::Network net =
        fit_network(model, sequence_tensor(x), onehot, 2, nn::LossKind::SoftmaxCrossEntropy, settings, seed);
    const nn::Tensor prob = net.predict(sequence_tensor(x_test));
    Vector p(static_cast<Index>(x_test.n()));
    for (Index i = 0; i < p.size(); ++i) p[i] = prob[2 * static_cast<std::size_t>(i) + 1];
    return p;
}

// ---------------------------------------------------------------------------
// Execution

/// Runs task(0..count-1) on `threads` workers. Each task writes only its own
/// output slots, so the schedule does not affect results.
template <class Task>
void run_tasks(std::size_t count, std::size_t threads, Task task) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
        });
    }
}

template <class Fn>
void record(RunResult& r, std::size_t rep, Fn fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
        fn();
    } catch (const std::exception& e) {
        r.errors[rep] = kNaN;
        if (!r.secondary.empty()) r.secondary[rep] = kNaN;
        r.failures[rep] = e.what();
        if (r.failures[rep].empty()) r.failures[rep] = "unknown failure";
    }
    r.seconds[rep] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunResult empty_result(std::string setting, std::string case_name, std::string model, std::size_t reps,
                       bool with_secondary) {
    RunResult r;
    r.setting = std::move(setting);
    r.case_name = std::move(case_name);
    r.model = std::move(model);
    r.errors.assign(reps, kNaN);
    if (with_secondary) r.secondary.assign(reps, kNaN);
    r.seconds.assign(reps, 0.0);
    r.failures.assign(reps, std::string());
    return r;
}

std::string quote_free(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '|', '/');
    return s;
}

std::string number_cell(double v) { return std::isnan(v) ? "NA" : format_double(v); }

double number_from_cell(const std::string& cell, std::size_t row, std::size_t col) {
    if (cell == "NA") return kNaN;
    return parse_cell(cell, row, col);
}

}  // namespace

// ---------------------------------------------------------------------------

double compute_mse(const Eigen::Ref<const Matrix>& pred, const Eigen::Ref<const Matrix>& truth) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
        throw DimensionError("MSE: prediction is " + std::to_string(pred.rows()) + "x" + std::to_string(pred.cols()) +
                             ", truth is " + std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()));
    }
    if (pred.size() == 0) throw EmptyInputError("MSE of empty arrays");
    return (pred - truth).array().square().mean();
}

BinaryMetrics compute_binary_metrics(const Eigen::Ref<const Vector>& prob, const Eigen::Ref<const Vector>& labels) {
    if (prob.size() != labels.size()) throw DimensionError("probabilities and labels differ in length");
    if (prob.size() == 0) throw EmptyInputError("binary metrics of empty arrays");
    BinaryMetrics m;
    std::size_t wrong = 0;
    for (Index i = 0; i < prob.size(); ++i) {
        const double p = prob[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw MetricError("probability " + format_double(p) + " at index " + std::to_string(i) + " outside [0,1]");
        }
        const double y = labels[i];
        if (y != 0.0 && y != 1.0) throw MetricError("label at index " + std::to_string(i) + " is not 0 or 1");
        m.prob_mse += (p - y) * (p - y);
        const double predicted = p >= 0.5 ? 1.0 : 0.0;
        if (predicted != y) ++wrong;
    }
    const auto n = static_cast<double>(prob.size());
    m.prob_mse /= n;
    m.misclassification = static_cast<double>(wrong) / n;
    return m;
}

std::string to_string(TableKind t) {
    switch (t) {
        case TableKind::Scalar: return "scalar";
        case TableKind::Binary: return "binary";
        case TableKind::FuncResp: return "funcresp";
        case TableKind::Tecator: return "tecator";
        case TableKind::Aemet: return "aemet";
    }
    return "scalar";
}

TableKind table_from_string(const std::string& name) {
    if (name == "scalar") return TableKind::Scalar;
    if (name == "binary") return TableKind::Binary;
    if (name == "funcresp") return TableKind::FuncResp;
    if (name == "tecator") return TableKind::Tecator;
    if (name == "aemet") return TableKind::Aemet;
    throw InvalidArgument("unknown table '" + name + "'");
}

std::vector<std::string> default_models(TableKind t) {
    switch (t) {
        case TableKind::Scalar:
        case TableKind::Tecator: return kScalarModels;
        case TableKind::Binary: return kBinaryModels;
        case TableKind::FuncResp:
        case TableKind::Aemet: return kFunctionalModels;
    }
    return {};
}

void check_model(TableKind t, const std::string& model) {
    const auto allowed = default_models(t);
    if (!contains(allowed, model)) {
        throw InvalidArgument("model '" + model + "' is not available for the " + to_string(t) +
                              " table (choose from " + join(allowed) + ")");
    }
}

ModelSettings ModelSettings::bench_defaults(TableKind t) {
    ModelSettings s;
    auto tune = [](NeuralSettings& ns, double lr, std::size_t epochs, std::size_t batch) {
        ns.training.learning_rate = lr;
        ns.training.epochs = epochs;
        ns.training.batch_size = batch;
    };
    switch (t) {
        case TableKind::Scalar:
        case TableKind::Tecator:
            tune(s.snn, 1e-3, 30, 32);
            tune(s.fnn, 1e-3, 30, 32);
            break;
        case TableKind::Binary:
            tune(s.snn, 1e-3, 10, 32);
            tune(s.fnn, 1e-3, 10, 32);
            break;
        case TableKind::FuncResp:
        case TableKind::Aemet:
            tune(s.dr, 1e-2, 20, 32);
            tune(s.cr, 1e-2, 20, 32);
            break;
    }
    return s;
}

Vector fit_predict_scalar(const std::string& model, const FunctionalDataset& x, const ScalarResponses& y,
                          const FunctionalDataset& x_test, const ModelSettings& settings, std::uint64_t seed) {
    if (y.kind == ResponseKind::Binary) {
        if (model == "logistic-FLM") return fit_logistic_flm(x, y, settings.q_est, settings.ridge).predict_proba(x_test);
        if (model == "SNN" || model == "FNN") return network_classifier(model, x, y, x_test, settings, seed);
        throw InvalidArgument("model '" + model + "' cannot fit binary responses");
    }
    if (model == "FLM-basis") return fit_flm_basis(x, y, settings.q_est, settings.ridge).predict(x_test);
    if (model == "FLM-fpca") return fit_flm_fpca(x, y, settings.fve).predict(x_test);
    if (model == "kernel-NP") return fit_kernel_np(x, y).predict(x_test);
    if (model == "SNN" || model == "FNN") return network_regression(model, x, y.values, x_test, settings, seed).col(0);
    throw InvalidArgument("model '" + model + "' cannot fit continuous scalar responses");
}

Matrix fit_predict_functional(const std::string& model, const FunctionalDataset& x, const FunctionalDataset& y,
                              const FunctionalDataset& x_test, const ModelSettings& settings, std::uint64_t seed) {
    if (model == "concurrent") return fit_concurrent(x, y).predict(x_test).curves();
    if (model == "FF-linear") return fit_ff_linear(x, y, settings.q_s, settings.q_t, settings.ridge).predict(x_test).curves();
    if (model == "DR") {
        if (x.length() != y.length()) throw DimensionError("DR needs predictor and response on grids of equal length");
        return network_regression(model, x, y.curves(), x_test, settings, seed);
    }
    if (model == "CR") return network_regression(model, x, y.curves(), x_test, settings, seed);
    throw InvalidArgument("model '" + model + "' cannot fit functional responses");
}

// ---------------------------------------------------------------------------

ExperimentPlan ExperimentPlan::defaults(TableKind table, std::size_t replicates, std::uint64_t seed) {
    ExperimentPlan p;
    p.table = table;
    p.replicates = replicates;
    p.seed = seed;
    p.models = default_models(table);
    p.settings = ModelSettings::bench_defaults(table);
    switch (table) {
        case TableKind::Scalar:
            p.q_values = {5, 9, 21};
            p.cases = {SimCase::Linear, SimCase::Sin};
            break;
        case TableKind::Binary:
            p.q_values = {5, 9, 21};
            p.cases = {SimCase::BinLinear, SimCase::BinSin};
            break;
        case TableKind::FuncResp:
            p.T_values = {100, 20};
            p.cases = {SimCase::CL, SimCase::CNL, SimCase::NCL, SimCase::NCNL};
            break;
        case TableKind::Tecator:
        case TableKind::Aemet:
            throw InvalidArgument("real datasets are run through RealPlan, not ExperimentPlan");
    }
    return p;
}

void ExperimentPlan::validate() const {
    if (models.empty()) throw InvalidArgument("experiment plan needs at least one model");
    if (replicates < 1) throw InvalidArgument("replicates must be at least 1");
    if (cases.empty()) throw InvalidArgument("experiment plan needs at least one case");
    if (threads < 1) throw InvalidArgument("threads must be at least 1");
    for (const auto& m : models) check_model(table, m);
    for (SimCase c : cases) {
        const bool ok = table == TableKind::FuncResp ? is_functional(c)
                        : table == TableKind::Binary ? is_binary(c)
                                                      : (c == SimCase::Linear || c == SimCase::Sin);
        if (!ok) throw InvalidArgument("case " + to_string(c) + " does not belong to the " + to_string(table) + " table");
    }
    if (table == TableKind::FuncResp) {
        if (T_values.empty()) throw InvalidArgument("functional-response plan needs T values");
    } else if (table == TableKind::Scalar || table == TableKind::Binary) {
        if (q_values.empty()) throw InvalidArgument("scalar plan needs q values");
    } else {
        throw InvalidArgument("real datasets are run through RealPlan, not ExperimentPlan");
    }
}

std::size_t RunResult::successes() const {
    return static_cast<std::size_t>(std::count(failures.begin(), failures.end(), std::string()));
}

bool RunResult::failed() const {
    const std::size_t bad = failures.size() - successes();
    return 5 * bad > failures.size();
}

std::string RunResult::failure_reason() const {
    for (const auto& f : failures)
        if (!f.empty()) return f;
    return {};
}

std::string cell_label(TableKind table, const std::string& setting, const std::string& case_name) {
    return to_string(table) + "|" + setting + "|" + case_name;
}

std::vector<RunResult> run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    struct Cell {
        std::string setting;
        SimSpec spec;
    };
    std::vector<Cell> cells;
    const bool functional = plan.table == TableKind::FuncResp;
    const auto& settings_axis = functional ? plan.T_values : plan.q_values;
    for (std::size_t value : settings_axis) {
        for (SimCase c : plan.cases) {
            SimSpec spec;
            spec.sim_case = c;
            spec.q = functional ? plan.funcresp_q : value;
            spec.T = functional ? value : plan.scalar_T;
            spec.n_train = plan.n_train;
            spec.n_test = plan.n_test;
            spec.coef_sd = plan.coef_sd;
            spec.noise_sd = plan.noise_sd;
            spec.validate();
            cells.push_back({(functional ? "T=" : "q=") + std::to_string(value), spec});
        }
    }

    const std::size_t n_models = plan.models.size();
    const bool binary = plan.table == TableKind::Binary;
    std::vector<RunResult> results;
    results.reserve(cells.size() * n_models);
    for (const auto& cell : cells)
        for (const auto& m : plan.models)
            results.push_back(empty_result(cell.setting, to_string(cell.spec.sim_case), m, plan.replicates, binary));

    run_tasks(cells.size() * plan.replicates, plan.threads, [&](std::size_t task) {
        const std::size_t c = task / plan.replicates;
        const std::size_t rep = task % plan.replicates;
        SimSpec spec = cells[c].spec;
        spec.seed = derive_seed(plan.seed, cell_label(plan.table, cells[c].setting, to_string(spec.sim_case)), rep);
        const SimData train = simulate(spec, SimPart::Train);
        const SimData test = simulate(spec, SimPart::Test);
        for (std::size_t m = 0; m < n_models; ++m) {
            RunResult& r = results[c * n_models + m];
            const std::string& model = plan.models[m];
            record(r, rep, [&] {
                if (functional) {
                    const Matrix pred = fit_predict_functional(model, train.x(), train.functional->response, test.x(),
                                                               plan.settings, spec.seed);
                    r.errors[rep] = compute_mse(pred, test.functional->signal);
                } else {
                    const Vector pred = fit_predict_scalar(model, train.x(), train.scalar->response, test.x(),
                                                           plan.settings, spec.seed);
                    r.errors[rep] = compute_mse(pred, test.scalar->signal);
                    if (binary) {
                        r.secondary[rep] =
                            compute_binary_metrics(pred, test.scalar->response.values).misclassification;
                    }
                }
                if (!std::isfinite(r.errors[rep])) throw NumericalError("non-finite test error");
            });
        }
    });
    return results;
}

RealPlan RealPlan::defaults(TableKind dataset, std::vector<std::string> paths, std::size_t repeats,
                            std::uint64_t seed) {
    if (dataset != TableKind::Tecator && dataset != TableKind::Aemet) {
        throw InvalidArgument("real-data plans need the tecator or aemet dataset");
    }
    RealPlan p;
    p.dataset = dataset;
    p.paths = std::move(paths);
    p.repeats = repeats;
    p.seed = seed;
    p.models = default_models(dataset);
    p.settings = ModelSettings::bench_defaults(dataset);
    return p;
}

std::vector<RunResult> run_real(const RealPlan& plan) {
    if (plan.models.empty()) throw InvalidArgument("real-data plan needs at least one model");
    if (plan.repeats < 1) throw InvalidArgument("repeats must be at least 1");
    for (const auto& m : plan.models) check_model(plan.dataset, m);
    const bool tecator = plan.dataset == TableKind::Tecator;
    if (tecator && plan.paths.size() != 1) throw InvalidArgument("tecator needs exactly one data file");
    if (!tecator && plan.paths.size() != 2) {
        throw InvalidArgument("aemet needs two data files: temperature and precipitation");
    }

    std::optional<TecatorData> tec;
    std::optional<AemetData> aem;
    std::size_t n = 0;
    SplitProtocol protocol;
    if (tecator) {
        tec = load_tecator(plan.paths[0], plan.require_full_size ? std::optional<std::size_t>(kTecatorRows) : std::nullopt);
        n = tec->absorbance.n();
        protocol = SplitProtocol::tecator(plan.seed, plan.repeats);
    } else {
        aem = load_aemet(plan.paths[0], plan.paths[1],
                         plan.require_full_size ? std::optional<std::size_t>(kAemetRows) : std::nullopt);
        n = aem->temperature.n();
        protocol = SplitProtocol::aemet(plan.seed, plan.repeats);
    }
    if (!plan.require_full_size) {
        // Fixture runs keep the protocol's proportions on smaller files.
        const std::size_t full = tecator ? kTecatorRows : kAemetRows;
        if (n < full) {
            protocol.n_test = std::max<std::size_t>(1, protocol.n_test * n / full);
            protocol.n_train = n - protocol.n_test;
        }
    }
    const std::vector<Split> splits = make_splits(n, protocol);

    const std::string setting = "n_train=" + std::to_string(protocol.n_train);
    const std::string case_name = to_string(plan.dataset);
    std::vector<RunResult> results;
    for (const auto& m : plan.models) results.push_back(empty_result(setting, case_name, m, plan.repeats, false));

    run_tasks(plan.repeats, plan.threads, [&](std::size_t rep) {
        const Split& split = splits[rep];
        const std::uint64_t seed = derive_seed(plan.seed, cell_label(plan.dataset, setting, case_name), rep);
        for (std::size_t m = 0; m < plan.models.size(); ++m) {
            RunResult& r = results[m];
            record(r, rep, [&] {
                if (tecator) {
                    const Vector pred = fit_predict_scalar(plan.models[m], tec->absorbance.subset(split.train),
                                                           tec->fat.subset(split.train),
                                                           tec->absorbance.subset(split.test), plan.settings, seed);
                    r.errors[rep] = compute_mse(pred, tec->fat.subset(split.test).values);
                } else {
                    const Matrix pred = fit_predict_functional(plan.models[m], aem->temperature.subset(split.train),
                                                               aem->log_precip.subset(split.train),
                                                               aem->temperature.subset(split.test), plan.settings, seed);
                    r.errors[rep] = compute_mse(pred, aem->log_precip.subset(split.test).curves());
                }
                if (!std::isfinite(r.errors[rep])) throw NumericalError("non-finite test error");
            });
        }
    });
    return results;
}

// ---------------------------------------------------------------------------

const ReportRow* ReportTable::find(const std::string& setting, const std::string& case_name,
                                   const std::string& model) const {
    for (const auto& r : rows)
        if (r.setting == setting && r.case_name == case_name && r.model == model) return &r;
    return nullptr;
}

ReportTable summarize(const std::vector<RunResult>& results) {
    if (results.empty()) throw EmptyInputError("no results to summarize");
    ReportTable table;
    for (const auto& r : results) {
        ReportRow row;
        row.setting = r.setting;
        row.case_name = r.case_name;
        row.model = r.model;
        std::vector<double> ok;
        std::vector<double> ok_secondary;
        for (std::size_t i = 0; i < r.errors.size(); ++i) {
            if (!r.failures[i].empty()) continue;
            ok.push_back(r.errors[i]);
            if (!r.secondary.empty()) ok_secondary.push_back(r.secondary[i]);
        }
        row.replicates = ok.size();
        if (ok.empty()) {
            row.mean_mse = kNaN;
            row.sd_mse = kNaN;
        } else {
            double sum = 0.0;
            for (double e : ok) sum += e;
            row.mean_mse = sum / static_cast<double>(ok.size());
            double ss = 0.0;
            for (double e : ok) ss += (e - row.mean_mse) * (e - row.mean_mse);
            row.sd_mse = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
        }
        if (!r.secondary.empty()) {
            table.has_misclassification = true;
            double sum = 0.0;
            for (double e : ok_secondary) sum += e;
            row.misclassification = ok_secondary.empty() ? kNaN : sum / static_cast<double>(ok_secondary.size());
        }
        if (r.failed()) row.failure = quote_free(r.failure_reason());
        table.rows.push_back(std::move(row));
    }
    return table;
}

ReportFormat format_from_string(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "markdown") return ReportFormat::Markdown;
    throw InvalidArgument("unknown report format '" + name + "' (expected csv or markdown)");
}

std::string render_report(const ReportTable& table, ReportFormat format) {
    std::vector<std::string> header = {"setting", "case", "model", "mean_mse", "sd_mse", "replicates"};
    if (table.has_misclassification) header.emplace_back("misclassification");
    header.emplace_back("status");

    std::vector<std::vector<std::string>> cells;
    for (const auto& r : table.rows) {
        std::vector<std::string> row = {r.setting, r.case_name, r.model, number_cell(r.mean_mse),
                                        number_cell(r.sd_mse), std::to_string(r.replicates)};
        if (table.has_misclassification) row.push_back(number_cell(r.misclassification.value_or(kNaN)));
        row.push_back(r.failure.empty() ? "ok" : "failed: " + r.failure);
        cells.push_back(std::move(row));
    }

    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        auto line = [&](const std::vector<std::string>& row) {
            for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
            out << '\n';
        };
        line(header);
        for (const auto& row : cells) line(row);
        return out.str();
    }

    std::vector<std::size_t> width(header.size());
    for (std::size_t j = 0; j < header.size(); ++j) width[j] = std::max<std::size_t>(3, header[j].size());
    for (const auto& row : cells)
        for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    // Text columns align left, numeric columns right.
    auto numeric = [&](std::size_t j) { return j >= 3 && j + 1 < header.size(); };
    auto line = [&](const std::vector<std::string>& row) {
        out << '|';
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << ' ' << (numeric(j) ? std::right : std::left) << std::setw(static_cast<int>(width[j])) << row[j]
                << " |";
        }
        out << '\n';
    };
    line(header);
    out << '|';
    for (std::size_t j = 0; j < header.size(); ++j) {
        out << (numeric(j) ? ' ' + std::string(width[j] - 1, '-') + ":" : ' ' + std::string(width[j], '-')) << " |";
    }
    out << '\n';
    for (const auto& row : cells) line(row);
    return out.str();
}

void emit_report(const ReportTable& table, ReportFormat format, const std::string& path) {
    const std::string text = render_report(table, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

ReportTable parse_report_csv(const std::string& path) {
    const CsvText csv = read_csv(path);
    std::vector<std::string> base = {"setting", "case", "model", "mean_mse", "sd_mse", "replicates"};
    if (csv.header.size() < base.size() + 1 || !std::equal(base.begin(), base.end(), csv.header.begin()) ||
        csv.header.back() != "status") {
        throw SchemaError("'" + path + "' is not a benchmark report");
    }
    ReportTable table;
    table.has_misclassification = csv.header.size() == base.size() + 2;
    if (table.has_misclassification && csv.header[6] != "misclassification") {
        throw SchemaError("'" + path + "': unexpected column '" + csv.header[6] + "'");
    }
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& cells = csv.rows[i];
        if (cells.size() != csv.header.size()) {
            throw SchemaError("'" + path + "' row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) +
                              " columns, expected " + std::to_string(csv.header.size()));
        }
        ReportRow row;
        row.setting = cells[0];
        row.case_name = cells[1];
        row.model = cells[2];
        row.mean_mse = number_from_cell(cells[3], i + 1, 4);
        row.sd_mse = number_from_cell(cells[4], i + 1, 5);
        row.replicates = static_cast<std::size_t>(parse_cell(cells[5], i + 1, 6));
        if (table.has_misclassification) row.misclassification = number_from_cell(cells[6], i + 1, 7);
        const std::string& status = cells.back();
        if (status.rfind("failed: ", 0) == 0) {
            row.failure = status.substr(8);
        } else if (status != "ok") {
            throw ParseError("row " + std::to_string(i + 1) + ": unknown status '" + status + "'");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace funbench
