#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "funbench/bench.hpp"
#include "funbench/errors.hpp"
#include "funbench/neuro/gradcheck.hpp"
#include "funbench/simgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

constexpr double kGradcheckTolerance = 1e-4;

int exit_code(const funbench::Error& e) {
    switch (e.category()) {
        case funbench::Error::Category::Usage: return kExitUsage;
        case funbench::Error::Category::Data: return kExitData;
        case funbench::Error::Category::Numeric: return kExitNumeric;
    }
    return kExitNumeric;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else if (c != ' ') {
            item += c;
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

int report_failures(const funbench::ReportTable& table) {
    int failed = 0;
    for (const auto& row : table.rows) {
        if (row.failure.empty()) continue;
        ++failed;
        std::cerr << "cell " << row.setting << " / " << row.case_name << " / " << row.model
                  << " failed: " << row.failure << '\n';
    }
    return failed == 0 ? kExitOk : kExitNumeric;
}

struct SimulateArgs {
    std::string case_name;
    std::size_t q = 5;
    std::size_t T = 100;
    std::size_t n = 200;
    std::uint64_t seed = 1;
    std::string out;
    double noise_sd = -1.0;
};

struct BenchArgs {
    std::string table;
    std::size_t replicates = 50;
    std::uint64_t seed = 1;
    std::string models;
    std::string out;
    std::string format = "csv";
    std::size_t threads = 1;
    std::vector<std::size_t> q_values;
    std::size_t funcresp_q = 0;
};

struct RealArgs {
    std::string dataset;
    std::vector<std::string> data;
    std::size_t repeats = 10;
    std::uint64_t seed = 1;
    std::string models;
    std::string out;
    std::string format = "csv";
    std::size_t threads = 1;
};

int run_simulate(const SimulateArgs& a) {
    funbench::SimSpec spec;
    spec.sim_case = funbench::sim_case_from_string(a.case_name);
    spec.q = a.q;
    spec.T = a.T;
    spec.n_train = a.n;
    spec.seed = a.seed;
    if (a.noise_sd >= 0.0) spec.noise_sd = a.noise_sd;
    const funbench::SimData data = funbench::simulate(spec, funbench::SimPart::Train);
    funbench::write_sim_csv(data, a.out);
    return kExitOk;
}

int run_bench(const BenchArgs& a) {
    const auto table = funbench::table_from_string(a.table);
    if (table == funbench::TableKind::Tecator || table == funbench::TableKind::Aemet) {
        throw funbench::InvalidArgument("use the real subcommand for " + a.table);
    }
    auto plan = funbench::ExperimentPlan::defaults(table, a.replicates, a.seed);
    if (!a.models.empty()) plan.models = split_list(a.models);
    if (!a.q_values.empty()) plan.q_values = a.q_values;
    if (a.funcresp_q > 0) plan.funcresp_q = a.funcresp_q;
    plan.threads = a.threads;
    const auto format = funbench::format_from_string(a.format);
    const auto report = funbench::summarize(funbench::run_experiment(plan));
    funbench::emit_report(report, format, a.out);
    return report_failures(report);
}

int run_real(const RealArgs& a) {
    const auto dataset = funbench::table_from_string(a.dataset);
    std::vector<std::string> paths;
    for (const auto& d : a.data)
        for (auto& p : split_list(d)) paths.push_back(std::move(p));
    auto plan = funbench::RealPlan::defaults(dataset, paths, a.repeats, a.seed);
    if (!a.models.empty()) plan.models = split_list(a.models);
    plan.threads = a.threads;
    const auto format = funbench::format_from_string(a.format);
    const auto report = funbench::summarize(funbench::run_real(plan));
    funbench::emit_report(report, format, a.out);
    return report_failures(report);
}

int run_gradcheck(std::uint64_t seed) {
    const auto results = funbench::nn::gradcheck_suite(seed);
    bool ok = true;
    for (const auto& r : results) {
        const bool pass = r.max_relative_error <= kGradcheckTolerance;
        ok = ok && pass;
        std::printf("%-12s params=%-4zu max_rel_err=%.3e %s\n", r.name.c_str(), r.parameters, r.max_relative_error,
                    pass ? "ok" : "FAIL");
    }
    return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional regression and sequential network benchmarks"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate one simulated training sample as CSV");
    simulate->add_option("--case", sim.case_name, "linear, sin, bin-linear, bin-sin, CL, CNL, NCL or NCNL")
        ->required();
    simulate->add_option("--q", sim.q, "Number of Fourier functions in the generator")->check(CLI::PositiveNumber);
    simulate->add_option("--T", sim.T, "Grid length")->check(CLI::Range(2, 1000000));
    simulate->add_option("--n", sim.n, "Sample size")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--noise-sd", sim.noise_sd, "Noise standard deviation (default depends on the case)")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--out", sim.out, "Output CSV path")->required();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a simulation table and write its report");
    bench_cmd->add_option("--table", bench.table, "scalar, binary or funcresp")
        ->required()
        ->check(CLI::IsMember({"scalar", "binary", "funcresp"}));
    bench_cmd->add_option("--replicates", bench.replicates, "Replicates per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench.seed, "Master seed");
    bench_cmd->add_option("--models", bench.models, "Comma-separated model list (default: all for the table)");
    bench_cmd->add_option("--out", bench.out, "Report path")->required();
    bench_cmd->add_option("--format", bench.format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));
    bench_cmd->add_option("--threads", bench.threads, "Worker threads for replicates")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--q-values", bench.q_values, "Override the q rows of the scalar and binary tables")
        ->delimiter(',');
    bench_cmd->add_option("--funcresp-q", bench.funcresp_q, "Generator q for the funcresp table")
        ->check(CLI::PositiveNumber);

    RealArgs real;
    auto* real_cmd = app.add_subcommand("real", "Run the repeated train/test protocol on a real dataset");
    real_cmd->add_option("--dataset", real.dataset, "tecator or aemet")
        ->required()
        ->check(CLI::IsMember({"tecator", "aemet"}));
    real_cmd->add_option("--data", real.data, "CSV path (aemet: temperature,precipitation)")->required();
    real_cmd->add_option("--repeats", real.repeats, "Number of random splits")->check(CLI::PositiveNumber);
    real_cmd->add_option("--seed", real.seed, "Master seed");
    real_cmd->add_option("--models", real.models, "Comma-separated model list");
    real_cmd->add_option("--out", real.out, "Report path")->required();
    real_cmd->add_option("--format", real.format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));
    real_cmd->add_option("--threads", real.threads, "Worker threads for repeats")->check(CLI::PositiveNumber);

    std::uint64_t grad_seed = 1;
    auto* grad = app.add_subcommand("gradcheck", "Compare analytic and finite-difference gradients");
    grad->add_option("--seed", grad_seed, "Initialization seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (bench_cmd->parsed()) return run_bench(bench);
        if (real_cmd->parsed()) return run_real(real);
        if (grad->parsed()) return run_gradcheck(grad_seed);
    } catch (const funbench::Error& e) {
        std::cerr << "funbench: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "funbench: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
