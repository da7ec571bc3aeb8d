#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "funbench/neuro/network.hpp"

namespace funbench::nn {

/// Relative error |a - n| / max(|a|, |n|, floor). The floor turns the test
/// into an absolute one for gradients that are numerically zero.
double relative_error(double analytic, double numeric, double floor = 1e-7);

struct GradcheckResult {
    std::string name;
    std::size_t parameters = 0;
    double max_relative_error = 0.0;
    std::size_t worst_block = 0;
    std::size_t worst_index = 0;
};

/// Compares backward() against central differences of the loss with the
/// given step, for every parameter of the network.
GradcheckResult check_gradients(const Network& net, const Tensor& x, const Tensor& target, double step = 1e-5);

/// Toy-size SNN, FNN, DR and CR networks (T = 7, widths <= 4) with regression
/// and softmax heads, plus a dense stack exercising every activation, all
/// randomly initialized from `seed`.
std::vector<GradcheckResult> gradcheck_suite(std::uint64_t seed, double step = 1e-5);

}  // namespace funbench::nn
