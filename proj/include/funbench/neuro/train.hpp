#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "funbench/neuro/network.hpp"

namespace funbench::nn {

struct TrainingConfig {
    double learning_rate = 1e-3;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool standardize_inputs = true;
    /// Rescale each gradient to at most this global L2 norm; 0 disables.
    double clip_norm = 0.0;

    void validate() const;
};

struct AdamState {
    Gradients first_moment;
    Gradients second_moment;
    std::uint64_t step = 0;

    static AdamState zeros_like(const Network& net);
};

/// One bias-corrected Adam update in place.
void adam_step(std::span<std::span<double>> params, const Gradients& grads, AdamState& state,
               const TrainingConfig& config);

/// Per-(time, feature) mean and sd over the samples of a [n, T, d] tensor.
InputScaling fit_input_scaling(const Tensor& x);

struct TrainResult {
    Network network;
    std::vector<double> epoch_loss;  // mean training loss per epoch
};

/// Mini-batch Adam. Samples are reshuffled every epoch from the
/// (seed, Shuffle) stream; the result depends only on the inputs.
/// Targets are [n, ...] tensors; classifier targets are one-hot rows.
TrainResult train(Network net, const Tensor& x, const Tensor& y, const TrainingConfig& config);

/// Rows `rows` of a tensor along its first axis.
Tensor gather_rows(const Tensor& t, std::span<const std::size_t> rows);

}  // namespace funbench::nn
