#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "funbench/neuro/tensor.hpp"

namespace funbench::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Flat gradient storage for one parameter block.
using GradBlock = Buffer;

enum class Activation { Identity, Tanh, Sigmoid, Softmax };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

/// Affine map followed by an activation, applied along the last axis, so a
/// rank-3 [batch, time, features] input is processed time-distributed.
struct DenseLayer {
    Matrix weights;  // d_out x d_in
    Vector bias;     // d_out
    Activation activation = Activation::Identity;

    DenseLayer() = default;
    DenseLayer(std::size_t d_in, std::size_t d_out, Activation act);

    std::size_t input_size() const noexcept { return static_cast<std::size_t>(weights.cols()); }
    std::size_t output_size() const noexcept { return static_cast<std::size_t>(weights.rows()); }
};

struct DenseCache {
    Tensor input;
    Tensor output;
};

Tensor dense_forward(const DenseLayer& layer, const Tensor& x);
Tensor dense_forward(const DenseLayer& layer, const Tensor& x, DenseCache& cache);
/// Accumulates into grads[0] (weights, column-major) and grads[1] (bias).
Tensor dense_backward(const DenseLayer& layer, const DenseCache& cache, const Tensor& dy,
                      std::span<GradBlock> grads);

enum class Direction { Forward, Bidirectional };
enum class SequenceOutput { Full, Last };

/// One direction of an LSTM. Gates are stacked in the order input, forget,
/// output, candidate; rows [0,H) of each weight belong to the input gate etc.
struct LstmCell {
    Matrix input_weights;      // 4H x d
    Matrix recurrent_weights;  // 4H x H
    Vector bias;               // 4H
};

/// LSTM over [batch, time, features] with zero initial states.
///
/// Bidirectional layers run a second cell over the reversed sequence and
/// concatenate [forward, backward] hidden states per time step. With
/// SequenceOutput::Last the forward half is taken at the final step and
/// the backward half at the first step (the last one it processes).
struct LstmLayer {
    std::vector<LstmCell> cells;  // 1 or 2 directions
    std::size_t hidden = 0;
    SequenceOutput output = SequenceOutput::Full;

    LstmLayer() = default;
    LstmLayer(std::size_t d_in, std::size_t hidden, Direction direction, SequenceOutput output);

    std::size_t input_size() const noexcept { return static_cast<std::size_t>(cells.front().input_weights.cols()); }
    std::size_t directions() const noexcept { return cells.size(); }
    std::size_t output_size() const noexcept { return hidden * cells.size(); }
    Direction direction() const noexcept { return cells.size() == 2 ? Direction::Bidirectional : Direction::Forward; }
};

struct LstmDirectionCache {
    RowMatrix gates;   // (T*B) x 4H post-activation, time-major rows
    RowMatrix cell;    // (T*B) x H
    RowMatrix tanh_cell;
    RowMatrix hidden;  // (T*B) x H
};

struct LstmCache {
    std::size_t batch = 0;
    std::size_t steps = 0;
    RowMatrix inputs;  // (T*B) x d, time-major
    std::vector<LstmDirectionCache> directions;

    // Backward scratch, kept here so repeated batches reuse the allocations.
    RowMatrix d_inputs;
    RowMatrix d_hidden;
    RowMatrix d_gates;
    RowMatrix prev_hidden;
};

Tensor lstm_forward(const LstmLayer& layer, const Tensor& x);
Tensor lstm_forward(const LstmLayer& layer, const Tensor& x, LstmCache& cache);
/// grads holds 3 blocks per direction: input weights, recurrent weights, bias.
Tensor lstm_backward(const LstmLayer& layer, LstmCache& cache, const Tensor& dy, std::span<GradBlock> grads);

/// Collapses every axis after the batch axis.
struct FlattenLayer {};

struct FlattenCache {
    Shape input_shape;
};

}  // namespace funbench::nn
